#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finsler/catalog.hpp"
#include "finsler/tables.hpp"

namespace finsler {

enum class Verdict { holds, indeterminate, fails };

const char* to_string(Verdict v);

struct Tolerances {
    double jet = 1e-7; // residual tolerance, jet derivative mode
    double fd = 1e-4;  // residual tolerance, finite-difference mode
    double ode = 1e-6; // transport diagnostics
    double hsc = 1e-6; // constancy of the holomorphic sectional curvature

    double residual(DerivativeMode mode) const { return mode == DerivativeMode::jet ? jet : fd; }
};

/// holds when max <= tol; indeterminate within 10x tol; fails beyond.
Verdict verdict_for(double max_residual, double tolerance);

struct PredicateResult {
    std::string name;
    std::vector<double> per_sample; // NaN marks a skipped sample
    double max_residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::fails;
};

struct ImplicationCheck {
    std::string name;
    bool consistent = false;
    std::string detail;
};

struct ClassificationReport {
    std::string metric_label;
    std::map<std::string, double> metric_params;
    SamplePlan plan;
    DerivativeMode mode = DerivativeMode::jet;
    std::vector<PredicateResult> predicates;
    std::vector<ImplicationCheck> implications;
    int skipped_samples = 0;

    const PredicateResult* find(const std::string& name) const;
};

// --- per-point residuals ----------------------------------------------------

/// Kaehler-Finsler: Gamma^a_{b;m} - Gamma^a_{m;b}.
double residual_kahler_finsler(PointEvaluation& eval);

/// Weakly Kaehler: G_a (Gamma^a_{b;m} - Gamma^a_{m;b}) v^b.
double residual_weakly_kahler(PointEvaluation& eval);

/// Complex Berwald: fiber derivatives of the Chern horizontal coefficients.
double residual_complex_berwald(PointEvaluation& eval);

/// Locally Minkowski: base derivatives of the Chern horizontal coefficients.
double residual_locally_minkowski(PointEvaluation& eval);

/// Landsberg: Berwald coefficients minus horizontal Cartan coefficients.
double residual_landsberg(PointEvaluation& eval);

/// Hermitian quadratic: fiber derivatives of G_{a bbar}.
double residual_hermitian_quadratic(PointEvaluation& eval);

/// Horizontal parallelism of the complex structure (both relations of the
/// horizontal characterization).
double residual_J_horizontal(PointEvaluation& eval);

/// Vertical parallelism of the complex structure.
double residual_J_vertical(PointEvaluation& eval);

/// J-invariance of the horizontal bundle (nonlinear coefficients).
double residual_H_J_invariance(PointEvaluation& eval);

struct CoincidenceResiduals {
    double horizontal = 0.0;
    double vertical = 0.0;
    double nonlinear = 0.0;

    double max() const { return std::max({horizontal, vertical, nonlinear}); }
};

/// Cartan (complexified) versus Chern-Finsler coefficients.
CoincidenceResiduals residual_connection_coincidence(PointEvaluation& eval);

// --- plan-level drivers -----------------------------------------------------

/// Evaluates every metric-class predicate over the sample plan.
ClassificationReport classify(const MetricDefinition& metric, const SamplePlan& plan,
                              const Tolerances& tolerances, DerivativeMode mode = DerivativeMode::jet);

struct EquivalenceLeg {
    std::string name;
    bool applicable = true;
    bool value = false;
    double residual = 0.0;
};

struct TheoremCheck {
    std::string name;
    std::vector<EquivalenceLeg> legs;
    bool consistent = false;
    std::string detail;
};

struct EquivalenceReport {
    std::string metric_label;
    SamplePlan plan;
    std::vector<TheoremCheck> checks;
    bool all_consistent = false;
    int skipped_samples = 0;
};

struct EquivalenceOptions {
    int transport_steps = 400;
    int transport_probes = 2; // geodesics grown from the first plan samples
};

/// Theorem-level equivalence verifier: connection-coincidence and
/// transport-characterization legs, each checked in both directions at the
/// residual level.
EquivalenceReport verify_equivalences(const MetricDefinition& metric, const SamplePlan& plan,
                                      const Tolerances& tolerances,
                                      DerivativeMode mode = DerivativeMode::jet,
                                      const EquivalenceOptions& options = {});

} // namespace finsler
