#include "rmfm/effects.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace rmfm {

// --- EffectId --------------------------------------------------------------------

EffectId::EffectId(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw std::invalid_argument("effect needs at least one factor");
    for (auto b : bits_)
        if (b > 1) throw std::invalid_argument("effect bits must be 0 or 1");
}

EffectId EffectId::from_bits(const std::string& text) {
    std::vector<std::uint8_t> bits;
    for (char ch : text) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("bad effect bit string '" + text + "'");
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return EffectId(std::move(bits));
}

EffectId EffectId::from_letters(const std::string& text, std::size_t factors) {
    std::vector<std::uint8_t> bits(factors, 0);
    if (text == "1" || text == "mean") return EffectId(std::move(bits));
    if (text.empty()) throw std::invalid_argument("empty effect name");
    for (char ch : text) {
        char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (up < 'A' || static_cast<std::size_t>(up - 'A') >= factors)
            throw std::invalid_argument("effect '" + text + "' names a factor outside A.." +
                                        std::string(1, static_cast<char>('A' + factors - 1)));
        auto k = static_cast<std::size_t>(up - 'A');
        if (bits[k]) throw std::invalid_argument("effect '" + text + "' repeats a factor");
        bits[k] = 1;
    }
    return EffectId(std::move(bits));
}

EffectId EffectId::parse(const std::string& text, std::size_t factors) {
    bool binary = !text.empty() && text.size() == factors &&
                  std::all_of(text.begin(), text.end(), [](char c) { return c == '0' || c == '1'; });
    if (binary) return from_bits(text);
    return from_letters(text, factors);
}

std::size_t EffectId::order() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

std::size_t EffectId::index() const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < bits_.size(); ++k) idx |= static_cast<std::size_t>(bits_[k]) << k;
    return idx;
}

std::string EffectId::bit_string() const {
    std::string s;
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
}

std::string EffectId::letters() const {
    std::string s;
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k]) s.push_back(static_cast<char>('A' + k));
    return s.empty() ? "mean" : s;
}

std::vector<EffectId> all_effects(std::size_t factors) {
    if (factors == 0 || factors > 16) throw std::invalid_argument("factor count must be in 1..16");
    std::vector<EffectId> out;
    for (std::size_t idx = 0; idx < (std::size_t{1} << factors); ++idx) {
        std::vector<std::uint8_t> bits(factors);
        for (std::size_t k = 0; k < factors; ++k) bits[k] = static_cast<std::uint8_t>((idx >> k) & 1U);
        out.emplace_back(std::move(bits));
    }
    return out;
}

// --- EffectSet -------------------------------------------------------------------

EffectSet::EffectSet(std::vector<EffectId> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("effect set must be non-empty");
    for (const auto& m : members_)
        if (m.factors() != members_.front().factors())
            throw std::invalid_argument("effects in a set must share the factor count");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

EffectSet EffectSet::all(std::size_t factors) { return EffectSet(all_effects(factors)); }

EffectSet EffectSet::additive(std::size_t factors) {
    std::vector<EffectId> out;
    for (auto& j : all_effects(factors))
        if (j.order() <= 1) out.push_back(j);
    return EffectSet(std::move(out));
}

EffectSet EffectSet::a_only(std::size_t factors) {
    std::vector<std::uint8_t> a(factors, 0);
    a[0] = 1;
    return EffectSet({EffectId(std::vector<std::uint8_t>(factors, 0)), EffectId(a)});
}

EffectSet EffectSet::parse(const std::string& text, std::size_t factors) {
    std::vector<EffectId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(EffectId::parse(item, factors));
    }
    return EffectSet(std::move(out));
}

bool EffectSet::contains(const EffectId& j) const {
    return std::find(members_.begin(), members_.end(), j) != members_.end();
}

std::optional<EffectSet> EffectSet::without(const EffectId& j) const {
    std::vector<EffectId> rest;
    for (const auto& m : members_)
        if (!(m == j)) rest.push_back(m);
    if (rest.empty()) return std::nullopt;
    return EffectSet(std::move(rest));
}

// --- CellLayout ------------------------------------------------------------------

CellLayout::CellLayout(std::vector<std::size_t> dims, std::vector<std::size_t> counts)
    : dims_(std::move(dims)), counts_(std::move(counts)) {
    if (dims_.empty()) throw std::invalid_argument("layout needs at least one factor");
    std::size_t cells = 1;
    for (auto d : dims_) {
        if (d == 0) throw std::invalid_argument("every factor needs at least one level");
        cells *= d;
    }
    if (counts_.size() != cells)
        throw std::invalid_argument("layout has " + std::to_string(counts_.size()) + " cell counts, expected " +
                                    std::to_string(cells));
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});

    for (std::size_t k = 0; k < dims_.size(); ++k) {
        std::vector<std::size_t> marginal(dims_[k], 0);
        for (std::size_t cell = 0; cell < cells; ++cell) marginal[cell_levels(cell)[k]] += counts_[cell];
        for (std::size_t level = 0; level < dims_[k]; ++level)
            if (marginal[level] == 0)
                throw std::invalid_argument("factor " + std::string(1, static_cast<char>('A' + k)) + " level " +
                                            std::to_string(level + 1) + " has no observations");
    }
}

CellLayout CellLayout::uniform(std::vector<std::size_t> dims, std::size_t per_cell) {
    std::size_t cells = 1;
    for (auto d : dims) cells *= d;
    return CellLayout(std::move(dims), std::vector<std::size_t>(cells, per_cell));
}

std::size_t CellLayout::cell_index(const std::vector<std::size_t>& levels) const {
    if (levels.size() != dims_.size()) throw std::invalid_argument("cell index: wrong number of levels");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (levels[k] >= dims_[k]) throw std::out_of_range("cell index: level out of range");
        idx = idx * dims_[k] + levels[k];
    }
    return idx;
}

std::vector<std::size_t> CellLayout::cell_levels(std::size_t cell) const {
    std::vector<std::size_t> levels(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        levels[k] = cell % dims_[k];
        cell /= dims_[k];
    }
    return levels;
}

bool CellLayout::balanced() const {
    return std::all_of(counts_.begin(), counts_.end(), [&](std::size_t c) { return c == counts_.front(); });
}

// --- Contrasts -------------------------------------------------------------------

void validate_contrasts(const RatMatrix& c) {
    const std::size_t m = c.rows();
    if (m < 2) throw std::invalid_argument("contrasts need at least two levels");
    if (c.cols() != m - 1)
        throw std::invalid_argument("contrast matrix for " + std::to_string(m) + " levels must have " +
                                    std::to_string(m - 1) + " columns");
    for (std::size_t j = 0; j < c.cols(); ++j) {
        Rat s;
        for (std::size_t i = 0; i < m; ++i) s += c(i, j);
        if (sgn(s) != 0) throw std::invalid_argument("contrast column " + std::to_string(j + 1) + " does not sum to 0");
    }
    if (rank(c) != m - 1) throw std::invalid_argument("contrast matrix is rank deficient");
}

ContrastScheme ContrastScheme::user_supplied(std::vector<std::optional<RatMatrix>> per_factor) {
    for (const auto& c : per_factor)
        if (c) validate_contrasts(*c);
    ContrastScheme scheme;
    scheme.per_factor_ = std::move(per_factor);
    if (std::none_of(scheme.per_factor_.begin(), scheme.per_factor_.end(), [](const auto& c) { return c.has_value(); }))
        scheme.per_factor_.clear();
    return scheme;
}

RatMatrix ContrastScheme::matrix(std::size_t factor, std::size_t levels) const {
    if (factor < per_factor_.size() && per_factor_[factor]) {
        const RatMatrix& c = *per_factor_[factor];
        if (c.rows() != levels)
            throw std::invalid_argument("contrasts for factor " + std::string(1, static_cast<char>('A' + factor)) +
                                        " have " + std::to_string(c.rows()) + " rows but the factor has " +
                                        std::to_string(levels) + " levels");
        return c;
    }
    return contrast_matrix(levels);
}

RatMatrix contrast_matrix(std::size_t m) {
    if (m < 2) throw std::invalid_argument("contrast_matrix: need at least two levels");
    RatMatrix c(m, m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        c(j, j) = static_cast<long>(m - j - 1);
        for (std::size_t i = j + 1; i < m; ++i) c(i, j) = -1;
    }
    return c;
}

RatMatrix contrast_matrix(std::size_t m, const ContrastScheme& scheme, std::size_t factor) {
    return scheme.matrix(factor, m);
}

// --- Effect projectors and blocks ---------------------------------------------------

Projector u_matrix(std::size_t m) {
    if (m == 0) throw std::invalid_argument("u_matrix: m must be positive");
    return projector(RatMatrix::ones(m, 1));
}

Projector s_matrix(std::size_t m) {
    if (m == 0) throw std::invalid_argument("s_matrix: m must be positive");
    return Projector::from_matrix(RatMatrix::identity(m) - u_matrix(m).matrix());
}

namespace {

void check_dims(const EffectId& j, const std::vector<std::size_t>& dims) {
    if (j.factors() != dims.size())
        throw std::invalid_argument("effect " + j.bit_string() + " does not match " + std::to_string(dims.size()) +
                                    " factors");
    for (auto d : dims)
        if (d == 0) throw std::invalid_argument("factor with zero levels");
}

}  // namespace

Projector h_projector(const EffectId& j, const std::vector<std::size_t>& dims) {
    check_dims(j, dims);
    Projector out = j[0] ? s_matrix(dims[0]) : u_matrix(dims[0]);
    for (std::size_t k = 1; k < dims.size(); ++k) out = kron(out, j[k] ? s_matrix(dims[k]) : u_matrix(dims[k]));
    return out;
}

Projector h_projector(const EffectSet& set, const std::vector<std::size_t>& dims) {
    RatMatrix total = h_projector(set.members().front(), dims).matrix();
    for (std::size_t i = 1; i < set.members().size(); ++i) total += h_projector(set.members()[i], dims).matrix();
    return Projector::from_matrix(std::move(total));
}

RatMatrix c_block(const EffectId& j, const std::vector<std::size_t>& dims, const ContrastScheme& scheme) {
    check_dims(j, dims);
    auto factor_block = [&](std::size_t k) {
        return j[k] ? scheme.matrix(k, dims[k]) : RatMatrix::ones(dims[k], 1);
    };
    RatMatrix out = factor_block(0);
    for (std::size_t k = 1; k < dims.size(); ++k) out = kron(out, factor_block(k));
    return out;
}

RatMatrix effect_model_matrix(const EffectSet& set, const std::vector<std::size_t>& dims,
                              const ContrastScheme& scheme) {
    if (set.factors() != dims.size()) throw std::invalid_argument("effect set does not match the layout's factors");
    std::vector<RatMatrix> blocks;
    for (const auto& j : set.members()) blocks.push_back(c_block(j, dims, scheme));
    return hconcat(blocks);
}

RatMatrix effect_model_matrix(const std::optional<EffectSet>& set, const std::vector<std::size_t>& dims,
                              const ContrastScheme& scheme) {
    if (set) return effect_model_matrix(*set, dims, scheme);
    std::size_t cells = 1;
    for (auto d : dims) cells *= d;
    return RatMatrix(cells, 0);
}

RatMatrix incidence(const CellLayout& layout) {
    RatMatrix k(layout.observations(), layout.cells());
    std::size_t row = 0;
    for (std::size_t cell = 0; cell < layout.cells(); ++cell)
        for (std::size_t rep = 0; rep < layout.counts()[cell]; ++rep) k(row++, cell) = 1;
    return k;
}

RatMatrix model_matrix(const EffectSet& set, const CellLayout& layout, const ContrastScheme& scheme) {
    return incidence(layout) * effect_model_matrix(set, layout.dims(), scheme);
}

}  // namespace rmfm
