#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

#include "finsler/geometry.hpp"
#include "finsler/jet.hpp"

namespace finsler {

/// Where base points may be sampled safely (strictly inside the smoothness
/// domain so finite-difference stencils have room).
struct SampleDomain {
    enum class Kind { all, ball, polydisk };
    Kind kind = Kind::all;
    double radius = 0.7;
};

/// A strongly convex complex Finsler metric as an evaluator of F^2 over
/// derivative-carrying scalars.
struct MetricDefinition {
    int n = 0;
    std::string label;
    std::map<std::string, double> params;

    /// F^2(z; v); must be real-valued on the domain. Throws DomainError off
    /// the smoothness domain.
    std::function<ComplexJet(std::span<const ComplexJet>, std::span<const ComplexJet>)> evaluate;

    /// Smoothness-domain predicate on the base point (the fiber is handled
    /// by the slit-bundle floor).
    std::function<bool(const ComplexVector&)> in_domain;

    SampleDomain sample_domain;

    bool contains(const ComplexVector& z) const { return !in_domain || in_domain(z); }
};

/// Plain-double evaluation of F^2 (value level of the jet evaluator).
double evaluate_f2(const MetricDefinition& metric, const ComplexVector& z, const ComplexVector& v);

} // namespace finsler
