#include "rmfm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace rmfm {

namespace {

std::string float_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string type_name(SsType t) { return "type " + std::to_string(static_cast<int>(t)); }

std::string effect_label(const EffectId& effect, const std::vector<std::string>& factor_names) {
    std::string s;
    for (std::size_t k = 0; k < effect.factors(); ++k)
        if (effect[k]) s += (s.empty() ? "" : "*") + factor_names[k];
    return s.empty() ? "mean" : s;
}

nlohmann::json exact(const Rat& v) { return {{"num", v.get_num().get_str()}, {"den", v.get_den().get_str()}}; }

nlohmann::json integer_entry(const Rat& v) {
    if (v.get_num().fits_slong_p()) return v.get_num().get_si();
    return v.get_num().get_str();
}

}  // namespace

std::string describe_main_effect_contrast(const RatMatrix& column, const EffectId& effect, const CellLayout& layout,
                                          const std::vector<std::string>& factor_names,
                                          const std::vector<std::vector<std::string>>& level_labels) {
    if (effect.order() != 1 || column.cols() != 1) return {};
    std::size_t k = 0;
    while (!effect[k]) ++k;
    if (!colspace(c_block(effect, layout.dims())).contains(column)) return {};

    // The column is c (x) 1: read c off the cells with every other factor at level 0.
    std::vector<Rat> coef(layout.dims()[k]);
    std::vector<std::size_t> levels(layout.factors(), 0);
    for (std::size_t i = 0; i < coef.size(); ++i) {
        levels[k] = i;
        coef[i] = column(layout.cell_index(levels), 0);
    }
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        if (sgn(coef[i]) == 0) continue;
        Rat mag = abs(coef[i]);
        if (first)
            out << (sgn(coef[i]) < 0 ? "-" : "");
        else
            out << (sgn(coef[i]) < 0 ? " - " : " + ");
        if (mag != 1) out << to_string(mag) << "*";
        out << "mean[" << factor_names[k] << "=" << level_labels[k][i] << "]";
        first = false;
    }
    return out.str();
}

AnovaReport run_anova(const Dataset& data, const AnovaRequest& request) {
    AnovaReport report{data.factor_names, data.level_labels, layout_of(data), request.model_name, request.model, {}};
    const CellLayout& layout = report.layout;
    if (request.model.factors() != layout.factors())
        throw std::invalid_argument("model does not match the dataset's " + std::to_string(layout.factors()) +
                                    " factors");
    const RatVector y = cell_ordered_response(data);
    const RatMatrix k = incidence(layout);
    const RatMatrix model_cells = effect_model_matrix(request.model, layout.dims(), request.scheme);
    const Projector residual = saturated_residual(layout);

    for (const auto& effect : request.effects) {
        if (!request.model.contains(effect))
            throw std::invalid_argument("effect " + effect_label(effect, data.factor_names) + " is not in the " +
                                        request.model_name + " model");
        const Subspace effect_space = colspace(h_projector(effect, layout.dims()).matrix());
        for (SsType t : request.types) {
            TestResult r = type_ss(t, effect, layout, y, request.scheme, residual);
            const Projector p = effect_projector(type_model(t, effect), effect, layout, request.scheme);
            Subspace target = testing_target(model_cells, k, p);
            const std::size_t overlap = intersect(target, effect_space).dim();

            AnovaEntry entry{effect, t, std::move(r), target, integer_columns(target.basis()), overlap, {}};
            const std::string name = effect_label(effect, data.factor_names);
            if (target.dim() == 0)
                entry.notes.push_back("tests nothing in this model");
            else if (overlap == target.dim())
                entry.notes.push_back("tests " + name + " effects only");
            else if (overlap == 0)
                entry.notes.push_back("tests no part of the " + name + " effects");
            else
                entry.notes.push_back("tests " + std::to_string(overlap) + " of " + std::to_string(target.dim()) +
                                      " dimensions inside the " + name + " effects");
            for (std::size_t c = 0; c < entry.target_basis.cols(); ++c) {
                auto text = describe_main_effect_contrast(RatMatrix::column(entry.target_basis.col(c)), effect, layout,
                                                          data.factor_names, data.level_labels);
                if (!text.empty()) entry.notes.push_back("column " + std::to_string(c + 1) + " proportional to " + text);
            }
            if (!entry.result.f_value) entry.notes.push_back("F and p undefined (no residual degrees of freedom or zero residual SS)");
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

std::string render_table(const AnovaReport& report) {
    std::ostringstream out;
    const auto& dims = report.layout.dims();
    out << "cells:";
    for (std::size_t k = 0; k < dims.size(); ++k) out << (k ? " x " : " ") << report.factor_names[k] << "(" << dims[k] << ")";
    out << ", n = " << report.layout.observations() << ", empty cells = "
        << std::count(report.layout.counts().begin(), report.layout.counts().end(), std::size_t{0}) << "\n";
    out << "targets reported in the " << report.model_name << " model {";
    for (std::size_t i = 0; i < report.model.members().size(); ++i)
        out << (i ? "," : "") << effect_label(report.model.members()[i], report.factor_names);
    out << "}\n";

    for (const auto& e : report.entries) {
        const auto& r = e.result;
        out << "\n" << effect_label(e.effect, report.factor_names) << ", " << type_name(e.type) << " SS\n";
        out << "  SS        " << to_string(r.ss_num) << "  (" << float_text(r.ss_num.get_d()) << ")\n";
        out << "  df        " << r.nu_num << "\n";
        out << "  error SS  " << to_string(r.ss_den) << "  (" << float_text(r.ss_den.get_d()) << ") on " << r.nu_den
            << " df\n";
        out << "  F         "
            << (r.f_value ? to_string(*r.f_value) + "  (" + float_text(r.f_value->get_d()) + ")" : std::string("undefined"))
            << "\n";
        out << "  p         " << (r.p_value ? float_text(*r.p_value) : std::string("undefined")) << "\n";
        out << "  target    dim " << e.target.dim() << ", inside effect: " << e.estimable_dim << "\n";

        for (std::size_t c = 0; c < e.target_basis.cols(); ++c) {
            out << "  column " << c + 1 << ":\n";
            const auto col = e.target_basis.col(c);
            std::size_t width = 1;
            for (const auto& v : col) width = std::max(width, to_string(v).size());
            if (dims.size() == 2) {
                for (std::size_t i = 0; i < dims[0]; ++i) {
                    out << "   ";
                    for (std::size_t j = 0; j < dims[1]; ++j)
                        out << " " << std::setw(static_cast<int>(width)) << to_string(col[i * dims[1] + j]);
                    out << "\n";
                }
            } else {
                out << "   ";
                for (const auto& v : col) out << " " << to_string(v);
                out << "\n";
            }
        }
        for (const auto& note : e.notes) out << "  note: " << note << "\n";
    }
    return out.str();
}

nlohmann::json to_json(const AnovaReport& report) {
    nlohmann::json doc;
    doc["factors"] = report.factor_names;
    doc["levels"] = report.level_labels;
    doc["cell_counts"] = report.layout.counts();
    doc["model"] = report.model_name;
    std::vector<std::string> members;
    for (const auto& j : report.model.members()) members.push_back(j.bit_string());
    doc["model_effects"] = members;

    doc["entries"] = nlohmann::json::array();
    for (const auto& e : report.entries) {
        const auto& r = e.result;
        nlohmann::json entry;
        entry["effect"] = effect_label(e.effect, report.factor_names);
        entry["effect_bits"] = e.effect.bit_string();
        entry["type"] = static_cast<int>(e.type);
        entry["ss"] = exact(r.ss_num);
        entry["ss_float"] = r.ss_num.get_d();
        entry["df"] = r.nu_num;
        entry["error_ss"] = exact(r.ss_den);
        entry["error_df"] = r.nu_den;
        entry["f"] = r.f_value ? exact(*r.f_value) : nlohmann::json(nullptr);
        entry["f_float"] = r.f_value ? nlohmann::json(r.f_value->get_d()) : nlohmann::json(nullptr);
        entry["p"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
        nlohmann::json basis = nlohmann::json::array();
        for (std::size_t c = 0; c < e.target_basis.cols(); ++c) {
            nlohmann::json column = nlohmann::json::array();
            for (const auto& v : e.target_basis.col(c)) column.push_back(integer_entry(v));
            basis.push_back(std::move(column));
        }
        entry["target_basis"] = std::move(basis);
        entry["target_dim"] = e.target.dim();
        entry["estimable_dim"] = e.estimable_dim;
        entry["notes"] = e.notes;
        doc["entries"].push_back(std::move(entry));
    }
    return doc;
}

}  // namespace rmfm
