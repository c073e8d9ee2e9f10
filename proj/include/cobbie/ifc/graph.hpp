#pragma once
// In-memory IFC entity graph. Immutable after parsing; safe for concurrent readers.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cobbie/ifc/value.hpp"

namespace cobbie::ifc {

struct EntityInstance {
    InstanceId id = 0;
    std::string ifc_type;  // uppercase
    AttributeList attributes;

    bool operator==(const EntityInstance&) const = default;
};

// (relationship-instance-id, attribute index through which the reference is held)
struct InverseEntry {
    InstanceId referrer = 0;
    int role = 0;
    bool operator==(const InverseEntry&) const = default;
};

struct DanglingReference {
    InstanceId referrer = 0;
    InstanceId target = 0;
    int role = 0;
};

class EntityGraph {
public:
    std::string schema_id;
    std::map<InstanceId, EntityInstance> entities;
    std::unordered_map<std::string, std::vector<InstanceId>> type_index;
    std::unordered_map<InstanceId, std::vector<InverseEntry>> inverse_index;
    std::vector<DanglingReference> dangling;

    bool has(InstanceId id) const { return entities.count(id) > 0; }
    const EntityInstance* find(InstanceId id) const {
        auto it = entities.find(id);
        return it == entities.end() ? nullptr : &it->second;
    }
    const EntityInstance& at(InstanceId id) const;

    const std::vector<InstanceId>& of_type(const std::string& upper_name) const;

    // Referrers of `id` whose entity type equals `rel_type` (uppercase).
    std::vector<InstanceId> referrers_of_type(InstanceId id, const std::string& rel_type) const;

    std::size_t size() const { return entities.size(); }

    bool operator==(const EntityGraph& o) const {
        return schema_id == o.schema_id && entities == o.entities;
    }
};

struct UnknownEntityError {
    InstanceId id = 0;
    std::string message;
};

// Thrown by EntityGraph::at and the navigation helpers.
class UnknownEntity : public std::exception {
public:
    explicit UnknownEntity(InstanceId id)
        : id_(id), msg_("unknown entity #" + std::to_string(id)) {}
    InstanceId id() const { return id_; }
    const char* what() const noexcept override { return msg_.c_str(); }

private:
    InstanceId id_;
    std::string msg_;
};

}  // namespace cobbie::ifc
