#include "vne/instance_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace vne {
namespace {

using nlohmann::json;

const json& Field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw InstanceFormatError(where + ": missing key '" + key + "'");
  }
  return object.at(key);
}

double Number(const json& object, const char* key, const std::string& where) {
  const json& v = Field(object, key, where);
  if (!v.is_number()) {
    throw InstanceFormatError(where + ": '" + key + "' must be a number");
  }
  return v.get<double>();
}

int Integer(const json& object, const char* key, const std::string& where) {
  const json& v = Field(object, key, where);
  if (!v.is_number_integer()) {
    throw InstanceFormatError(where + ": '" + key + "' must be an integer");
  }
  return v.get<int>();
}

const json& Array(const json& object, const char* key, const std::string& where) {
  const json& v = Field(object, key, where);
  if (!v.is_array()) {
    throw InstanceFormatError(where + ": '" + key + "' must be an array");
  }
  return v;
}

PhysicalNetwork NetworkFromJson(const json& j) {
  std::vector<PhysicalNode> nodes;
  const json& node_list = Array(j, "nodes", "physical_network");
  for (std::size_t i = 0; i < node_list.size(); ++i) {
    const std::string where = "physical_network.nodes[" + std::to_string(i) + "]";
    nodes.push_back({Integer(node_list[i], "id", where),
                     Number(node_list[i], "cpu_capacity", where)});
  }
  std::vector<PhysicalLink> links;
  if (j.contains("links")) {
    const json& link_list = Array(j, "links", "physical_network");
    for (std::size_t i = 0; i < link_list.size(); ++i) {
      const std::string where = "physical_network.links[" + std::to_string(i) + "]";
      links.push_back({Integer(link_list[i], "from", where),
                       Integer(link_list[i], "to", where),
                       Number(link_list[i], "bandwidth", where)});
    }
  }
  return PhysicalNetwork(std::move(nodes), std::move(links));
}

VnRequest RequestFromJson(const json& j, std::size_t index) {
  const std::string where = "vn_requests[" + std::to_string(index) + "]";
  std::vector<VirtualNode> vnodes;
  const json& vnode_list = Array(j, "vnodes", where);
  for (std::size_t v = 0; v < vnode_list.size(); ++v) {
    vnodes.push_back({Number(vnode_list[v], "demand",
                             where + ".vnodes[" + std::to_string(v) + "]")});
  }
  std::vector<VirtualLink> vlinks;
  if (j.contains("vlinks")) {
    const json& vlink_list = Array(j, "vlinks", where);
    for (std::size_t e = 0; e < vlink_list.size(); ++e) {
      const std::string at = where + ".vlinks[" + std::to_string(e) + "]";
      vlinks.push_back({Integer(vlink_list[e], "from", at),
                        Integer(vlink_list[e], "to", at),
                        Number(vlink_list[e], "demand", at)});
    }
  }
  double value = 0.0;
  for (const VirtualNode& v : vnodes) value += v.demand;
  if (j.contains("value")) value = Number(j, "value", where);
  const int id = j.contains("id") ? Integer(j, "id", where) : static_cast<int>(index);
  return VnRequest(id, std::move(vnodes), std::move(vlinks), value);
}

}  // namespace

Instance ParseInstance(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InstanceFormatError(std::string("instance is not valid JSON: ") + e.what());
  }
  Instance out;
  try {
    out.network = NetworkFromJson(Field(j, "physical_network", "instance"));
    if (j.contains("vn_requests")) {
      const json& list = Array(j, "vn_requests", "instance");
      for (std::size_t r = 0; r < list.size(); ++r) {
        out.requests.push_back(RequestFromJson(list[r], r));
      }
    }
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(std::string("invalid instance: ") + e.what());
  }
  return out;
}

Instance LoadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open " + path.string());
  try {
    return ParseInstance(in);
  } catch (const InstanceFormatError& e) {
    throw InstanceFormatError(path.string() + ": " + e.what());
  }
}

void WriteInstance(const Instance& instance, std::ostream& out) {
  json net;
  net["nodes"] = json::array();
  for (const PhysicalNode& n : instance.network.nodes()) {
    net["nodes"].push_back({{"id", n.id}, {"cpu_capacity", n.cpu_capacity}});
  }
  net["links"] = json::array();
  for (const PhysicalLink& l : instance.network.links()) {
    net["links"].push_back({{"from", l.from}, {"to", l.to}, {"bandwidth", l.bandwidth}});
  }
  json requests = json::array();
  for (const VnRequest& r : instance.requests) {
    json vnodes = json::array();
    for (const VirtualNode& v : r.vnodes()) vnodes.push_back({{"demand", v.demand}});
    json vlinks = json::array();
    for (const VirtualLink& e : r.vlinks()) {
      vlinks.push_back({{"from", e.from}, {"to", e.to}, {"demand", e.demand}});
    }
    requests.push_back(
        {{"id", r.id()}, {"value", r.value()}, {"vnodes", vnodes}, {"vlinks", vlinks}});
  }
  json doc;
  doc["physical_network"] = std::move(net);
  doc["vn_requests"] = std::move(requests);
  out << doc.dump(2) << '\n';
}

void SaveInstance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteInstance(instance, out);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace vne
