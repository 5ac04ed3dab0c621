#ifndef VNE_INSTANCE_IO_H_
#define VNE_INSTANCE_IO_H_

// Instance files are JSON objects with two keys:
//
//   {
//     "physical_network": {
//       "nodes": [{"id": 0, "cpu_capacity": 100}, ...],
//       "links": [{"from": 0, "to": 1, "bandwidth": 100}, ...]
//     },
//     "vn_requests": [
//       {"id": 0, "value": 12,
//        "vnodes": [{"demand": 5}, ...],
//        "vlinks": [{"from": 0, "to": 1, "demand": 3}, ...]}
//     ]
//   }
//
// `vn_requests` may be omitted or empty. Link endpoints are node ids, vlink
// endpoints are vnode indices within their request.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/model.h"

namespace vne {

struct Instance {
  PhysicalNetwork network;
  std::vector<VnRequest> requests;
};

// Malformed files, unknown shapes and domain validation failures.
class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance ParseInstance(std::istream& in);
Instance LoadInstance(const std::filesystem::path& path);
void WriteInstance(const Instance& instance, std::ostream& out);
void SaveInstance(const Instance& instance, const std::filesystem::path& path);

}  // namespace vne

#endif  // VNE_INSTANCE_IO_H_
