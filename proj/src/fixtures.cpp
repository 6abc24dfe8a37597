#include "rmfm/fixtures.hpp"

#include "json.hpp"

#include <fstream>
#include <stdexcept>

#ifndef RMFM_DATA_DIR
#define RMFM_DATA_DIR "data"
#endif

namespace rmfm {

std::string default_reference_path() { return std::string(RMFM_DATA_DIR) + "/table1.json"; }

ReferenceTable load_reference_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference table '" + path + "'");
    const auto doc = nlohmann::json::parse(in);

    const auto dims = doc.at("dims").get<std::vector<std::size_t>>();
    ReferenceTable table;
    for (const auto& [name, entry] : doc.at("layouts").items()) {
        ReferenceLayout ref{name, CellLayout(dims, entry.at("counts").get<std::vector<std::size_t>>()), {}, {}};
        for (const auto& [key, columns] : entry.at("targets").items()) {
            std::vector<RatVector> cols;
            for (const auto& column : columns) {
                RatVector v;
                for (const auto& x : column) v.emplace_back(x.get<long>());
                cols.push_back(std::move(v));
            }
            ref.targets.emplace(key, RatMatrix::from_columns(ref.layout.cells(), cols));
        }
        if (entry.contains("a_effect_overlap"))
            for (const auto& [key, dim] : entry.at("a_effect_overlap").items())
                ref.a_effect_overlap.emplace(key, dim.get<std::size_t>());
        table.layouts.push_back(std::move(ref));
    }
    return table;
}

}  // namespace rmfm
