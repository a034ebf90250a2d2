#include "geoloc/home_table.hpp"

#include <algorithm>
#include <fstream>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

namespace geoloc {

std::vector<UserId> HomeLocationTable::users() const {
    std::vector<UserId> ids;
    ids.reserve(map_.size());
    for (const auto& [user, city] : map_) ids.push_back(user);
    return ids;
}

HomeLocationTable HomeLocationTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    HomeLocationTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 2 || fields[1].empty())
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected 'user_id<TAB>city_id'");
        const UserId user = parse_u64(fields[0], "user id");
        if (table.contains(user))
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": duplicate user " + std::to_string(user));
        table.assign(user, std::string(fields[1]));
    }
    return table;
}

void HomeLocationTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const auto& [user, city] : map_)
        out << user << '\t' << city << '\n';
    if (!out) throw ValidationError("write failed: " + path.string());
}

CityCodes CityCodes::build(const SocialGraph& g, const HomeLocationTable& homes) {
    CityCodes codes;
    codes.names.reserve(64);
    for (const auto& [user, city] : homes) {
        (void)user;
        codes.names.push_back(city);
    }
    std::sort(codes.names.begin(), codes.names.end());
    codes.names.erase(std::unique(codes.names.begin(), codes.names.end()), codes.names.end());

    codes.code_per_node.assign(g.node_count(), -1);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto* city = homes.find(g.user_at(static_cast<SocialGraph::NodeIndex>(i)));
        if (city == nullptr) continue;
        const auto it = std::lower_bound(codes.names.begin(), codes.names.end(), *city);
        codes.code_per_node[i] = static_cast<std::int32_t>(it - codes.names.begin());
    }
    return codes;
}

} // namespace geoloc
