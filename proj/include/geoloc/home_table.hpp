#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "geoloc/graph.hpp"

namespace geoloc {

/// user -> home city. Ordered by user id; no user maps to more than one city.
class HomeLocationTable {
public:
    void assign(UserId user, std::string city_id) { map_[user] = std::move(city_id); }

    bool contains(UserId user) const { return map_.count(user) != 0; }

    /// nullptr when the user has no assigned home.
    const std::string* find(UserId user) const {
        const auto it = map_.find(user);
        return it == map_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return map_.size(); }
    bool empty() const { return map_.empty(); }

    auto begin() const { return map_.begin(); }
    auto end() const { return map_.end(); }

    std::vector<UserId> users() const;

    /// Text format: `user_id<TAB>city_id` per line, ascending user id.
    static HomeLocationTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::map<UserId, std::string> map_;
};

/// City names interned as dense codes aligned to a graph's node order.
/// names is sorted, so code order equals lexicographic city order.
struct CityCodes {
    std::vector<std::string> names;
    std::vector<std::int32_t> code_per_node; // -1 when the node has no home

    static CityCodes build(const SocialGraph& g, const HomeLocationTable& homes);
};

} // namespace geoloc
