#include "finsler/derivatives.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace finsler {

namespace {

const std::complex<double> kI(0.0, 1.0);

std::uint32_t real_key(std::span<const int> sorted_dirs) {
    std::uint32_t key = 0;
    std::size_t i = 0;
    for (; i < sorted_dirs.size(); ++i) key |= static_cast<std::uint32_t>(sorted_dirs[i] + 1) << (8 * i);
    for (; i < 4; ++i) key |= 0xffu << (8 * i);
    return key;
}

std::uint64_t wirtinger_key(std::span<const WDir> sorted_dirs) {
    std::uint64_t key = 0;
    std::size_t i = 0;
    for (; i < sorted_dirs.size(); ++i) {
        const auto byte = static_cast<std::uint64_t>(
            (static_cast<unsigned>(sorted_dirs[i].kind) << 6) | static_cast<unsigned>(sorted_dirs[i].index));
        key |= byte << (8 * i);
    }
    for (; i < 4; ++i) key |= 0xffull << (8 * i);
    return key;
}

void check_dirs(std::span<const int> dirs, int n) {
    if (dirs.size() > 4) throw OrderError("derivative order above 4 is not supported");
    for (int d : dirs)
        if (d < 0 || d >= 4 * n) throw DimensionError("coordinate direction out of range");
}

/// One finite-difference stencil pass at base step h.
double fd_stencil(const MetricDefinition& metric, const PointState& p,
                  const std::vector<std::pair<int, int>>& multiplicities, double h) {
    // Per-variable central stencils; tensor product over distinct variables.
    struct Term {
        int offset;
        double weight;
    };
    static const std::vector<Term> stencils[4] = {
        {{1, 0.5}, {-1, -0.5}},
        {{1, 1.0}, {0, -2.0}, {-1, 1.0}},
        {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}},
        {{2, 1.0}, {1, -4.0}, {0, 6.0}, {-1, -4.0}, {-2, 1.0}},
    };

    const int n = p.n;
    double total = 0.0;
    std::vector<std::size_t> choice(multiplicities.size(), 0);
    while (true) {
        double weight = 1.0;
        RealVector x = p.x, y = p.y;
        for (std::size_t i = 0; i < multiplicities.size(); ++i) {
            const auto& [dir, m] = multiplicities[i];
            const Term& term = stencils[m - 1][choice[i]];
            weight *= term.weight / std::pow(h, m);
            const double shift = term.offset * h;
            if (dir < 2 * n)
                x[dir] += shift;
            else
                y[dir - 2 * n] += shift;
        }
        const PointState q = PointState::from_real(x, y);
        if (!metric.contains(q.z)) throw DomainError("finite-difference stencil leaves the metric domain");
        total += weight * evaluate_f2(metric, q.z, q.v);

        std::size_t i = 0;
        for (; i < choice.size(); ++i) {
            const auto m = multiplicities[i].second;
            if (++choice[i] < stencils[m - 1].size()) break;
            choice[i] = 0;
        }
        if (i == choice.size()) break;
    }
    return total;
}

} // namespace

double evaluate_f2(const MetricDefinition& metric, const ComplexVector& z, const ComplexVector& v) {
    std::vector<ComplexJet> zj(metric.n), vj(metric.n);
    for (int a = 0; a < metric.n; ++a) {
        zj[a] = ComplexJet(z[a]);
        vj[a] = ComplexJet(v[a]);
    }
    return metric.evaluate(zj, vj).re.value();
}

double fd_partial(const MetricDefinition& metric, const PointState& p, std::span<const int> dirs,
                  const FdOptions& options) {
    check_dirs(dirs, p.n);
    if (dirs.empty()) return evaluate_f2(metric, p.z, p.v);

    std::vector<std::pair<int, int>> multiplicities; // (direction id, multiplicity)
    for (int d : dirs) {
        auto it = std::find_if(multiplicities.begin(), multiplicities.end(),
                               [d](const auto& e) { return e.first == d; });
        if (it == multiplicities.end())
            multiplicities.emplace_back(d, 1);
        else
            ++it->second;
    }

    const double h = options.step[dirs.size() - 1];
    const double d_h = fd_stencil(metric, p, multiplicities, h);
    if (!options.richardson) return d_h;
    // Central stencils have an even error series, so each Richardson level
    // removes one h^2 power pair: O(h^2) -> O(h^4) -> O(h^6).
    const double d_h2 = fd_stencil(metric, p, multiplicities, 0.5 * h);
    const double d_h4 = fd_stencil(metric, p, multiplicities, 0.25 * h);
    const double r1 = (4.0 * d_h2 - d_h) / 3.0;
    const double r2 = (4.0 * d_h4 - d_h2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

PartialTable::PartialTable(const MetricDefinition& metric, const PointState& p, DerivativeMode mode,
                           FdOptions fd)
    : metric_(metric), point_(p), mode_(mode), fd_(fd) {
    if (metric.n != p.n) throw DimensionError("metric and point dimensions differ");
    if (!metric.contains(p.z)) throw DomainError("base point outside the metric domain");
}

double PartialTable::f2() { return real_partial(std::span<const int>()); }

double PartialTable::evaluate_with_seeds(std::span<const int> sorted_dirs) {
    const int n = point_.n;
    std::vector<ComplexJet> z(n), v(n);
    for (int a = 0; a < n; ++a) {
        z[a] = ComplexJet(point_.z[a]);
        v[a] = ComplexJet(point_.v[a]);
    }
    for (std::size_t slot = 0; slot < sorted_dirs.size(); ++slot) {
        const int dir = sorted_dirs[slot];
        Jet* component = nullptr;
        if (dir < n)
            component = &z[dir].re;
        else if (dir < 2 * n)
            component = &z[dir - n].im;
        else if (dir < 3 * n)
            component = &v[dir - 2 * n].re;
        else
            component = &v[dir - 3 * n].im;
        component->set_coeff(1u << slot, 1.0);
    }
    const ComplexJet f2 = metric_.evaluate(z, v);

    // One evaluation yields every mixed partial over subsets of the seeds.
    const unsigned full = (1u << sorted_dirs.size()) - 1u;
    std::array<int, 4> subset{};
    for (unsigned mask = 0; mask <= full; ++mask) {
        int count = 0;
        for (std::size_t slot = 0; slot < sorted_dirs.size(); ++slot)
            if (mask & (1u << slot)) subset[count++] = sorted_dirs[slot];
        real_memo_[real_key(std::span<const int>(subset.data(), count))] = f2.re.coeff(mask);
    }
    return f2.re.coeff(full);
}

double PartialTable::real_partial(std::span<const int> dirs) {
    check_dirs(dirs, point_.n);
    std::array<int, 4> sorted{};
    std::copy(dirs.begin(), dirs.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.begin() + dirs.size());
    const auto view = std::span<const int>(sorted.data(), dirs.size());

    const auto key = real_key(view);
    if (auto it = real_memo_.find(key); it != real_memo_.end()) return it->second;

    double value = 0.0;
    if (mode_ == DerivativeMode::jet) {
        value = evaluate_with_seeds(view);
    } else {
        value = fd_partial(metric_, point_, view, fd_);
        real_memo_[key] = value;
    }
    return value;
}

std::complex<double> PartialTable::wirtinger(std::span<const WDir> dirs) {
    if (dirs.size() > 4) throw OrderError("derivative order above 4 is not supported");
    const int n = point_.n;
    for (const WDir& d : dirs)
        if (d.index < 0 || d.index >= n) throw DimensionError("Wirtinger index out of range");

    std::array<WDir, 4> sorted{};
    std::copy(dirs.begin(), dirs.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.begin() + dirs.size(), [](const WDir& a, const WDir& b) {
        return std::make_pair(static_cast<unsigned>(a.kind), a.index) <
               std::make_pair(static_cast<unsigned>(b.kind), b.index);
    });
    const auto view = std::span<const WDir>(sorted.data(), dirs.size());
    const auto key = wirtinger_key(view);
    if (auto it = wirtinger_memo_.find(key); it != wirtinger_memo_.end()) return it->second;

    // d/dz^a   = (d/dx^a - i d/dx^(a+n))/2 and likewise on the fiber; the
    // mixed partial expands into 2^k weighted real partials.
    std::complex<double> total = 0.0;
    const std::size_t k = dirs.size();
    for (unsigned pick = 0; pick < (1u << k); ++pick) {
        std::complex<double> weight = 1.0;
        std::array<int, 4> ids{};
        for (std::size_t i = 0; i < k; ++i) {
            const WDir& d = view[i];
            const bool starred = pick & (1u << i);
            int id = 0;
            switch (d.kind) {
            case WKind::z: id = starred ? d.index + n : d.index; break;
            case WKind::zbar: id = starred ? d.index + n : d.index; break;
            case WKind::v: id = starred ? d.index + 3 * n : d.index + 2 * n; break;
            case WKind::vbar: id = starred ? d.index + 3 * n : d.index + 2 * n; break;
            }
            ids[i] = id;
            if (!starred) {
                weight *= 0.5;
            } else {
                const bool conjugated = d.kind == WKind::zbar || d.kind == WKind::vbar;
                weight *= conjugated ? 0.5 * kI : -0.5 * kI;
            }
        }
        total += weight * real_partial(std::span<const int>(ids.data(), k));
    }
    wirtinger_memo_[key] = total;
    return total;
}

} // namespace finsler
