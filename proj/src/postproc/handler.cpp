#include "voltaic/postproc/handler.hpp"

#include <algorithm>
#include <fmt/core.h>
#include <stdexcept>

namespace voltaic {

SymbolsHandler::SymbolsHandler(std::vector<SymbolStore> stores)
{
    for (auto& s : stores) {
        add(std::move(s));
    }
}

void SymbolsHandler::add(SymbolStore store)
{
    auto id = store.run_id;
    stores_[id] = std::move(store);
}

std::vector<std::string> SymbolsHandler::runs() const
{
    std::vector<std::string> out;
    for (const auto& [id, s] : stores_) {
        out.push_back(id);
    }
    return out;
}

const SymbolStore* SymbolsHandler::store(const std::string& run_id) const
{
    auto it = stores_.find(run_id);
    return it == stores_.end() ? nullptr : &it->second;
}

bool SymbolsHandler::has_symbol(const std::string& name) const
{
    for (const auto& [id, s] : stores_) {
        if (s.find(name)) {
            return true;
        }
    }
    return false;
}

Symbol SymbolsHandler::lookup(const std::string& name) const
{
    Symbol out;
    bool found = false;
    for (const auto& [id, store] : stores_) {
        const Symbol* s = store.find(name);
        if (!s) {
            continue;
        }
        if (!found) {
            out.name = s->name;
            out.kind = s->kind;
            out.unit = s->unit;
            out.dims = s->dims;
            out.dims.push_back("run");
            found = true;
        } else if (s->dims.size() + 1 != out.dims.size() ||
                   !std::equal(s->dims.begin(), s->dims.end(), out.dims.begin())) {
            throw std::invalid_argument(fmt::format("symbol '{}' has different dims in run '{}'", name, id));
        }
        for (const auto& [key, v] : s->records) {
            Tuple k = key;
            k.push_back(id);
            out.records.emplace(std::move(k), v);
        }
    }
    if (!found) {
        throw std::out_of_range(fmt::format("symbol '{}' not found in any run", name));
    }
    return out;
}

} // namespace voltaic
