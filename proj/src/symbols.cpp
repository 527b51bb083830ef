#include "smset/symbols.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace smset {

namespace {
struct Table {
    std::mutex mu;
    std::unordered_map<std::string, Sym> ids;
    std::deque<std::string> names;
};
Table& table() {
    static Table t;
    return t;
}
} // namespace

Sym intern(const std::string& name) {
    Table& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    Sym id = static_cast<Sym>(t.names.size());
    t.names.push_back(name);
    t.ids.emplace(name, id);
    return id;
}

const std::string& sym_name(Sym s) {
    Table& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    if (s >= t.names.size()) throw std::logic_error("symbols: bad id");
    return t.names[s];
}

bool sym_known(const std::string& name) {
    Table& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    return t.ids.count(name) != 0;
}

} // namespace smset
