#include "finsler/transport.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace finsler {

namespace {

class LineCurve final : public Curve {
public:
    LineCurve(RealVector x0, RealVector velocity, double T)
        : x0_(std::move(x0)), velocity_(std::move(velocity)), duration_(T) {
        if (velocity_.norm() < kVMin) throw DomainError("line curve below the regularity floor");
        if (!(T > 0.0)) throw ParamError("curve duration must be positive");
    }

    double duration() const override { return duration_; }

    void eval(double t, RealVector& position, RealVector& velocity) const override {
        position = x0_ + t * velocity_;
        velocity = velocity_;
    }

private:
    RealVector x0_, velocity_;
    double duration_;
};

class InterpolatedCurve final : public Curve {
public:
    InterpolatedCurve(std::vector<double> times, std::vector<RealVector> x, std::vector<RealVector> y)
        : times_(std::move(times)), x_(std::move(x)), y_(std::move(y)) {
        for (const auto& v : y_)
            if (v.norm() < kVMin) throw DomainError("interpolated curve below the regularity floor");
    }

    double duration() const override { return times_.back(); }

    void eval(double t, RealVector& position, RealVector& velocity) const override {
        const double T = times_.back();
        t = std::clamp(t, 0.0, T);
        const std::size_t segments = times_.size() - 1;
        const double h = T / static_cast<double>(segments);
        const std::size_t i = std::min(static_cast<std::size_t>(t / h), segments - 1);
        const double s = (t - times_[i]) / h;

        const double h00 = (2 * s - 3) * s * s + 1;
        const double h10 = ((s - 2) * s + 1) * s;
        const double h01 = (3 - 2 * s) * s * s;
        const double h11 = (s - 1) * s * s;
        position = h00 * x_[i] + (h10 * h) * y_[i] + h01 * x_[i + 1] + (h11 * h) * y_[i + 1];

        const double d00 = 6 * s * (s - 1);
        const double d10 = (3 * s - 4) * s + 1;
        const double d01 = -d00;
        const double d11 = (3 * s - 2) * s;
        velocity = (d00 / h) * x_[i] + d10 * y_[i] + (d01 / h) * x_[i + 1] + d11 * y_[i + 1];
    }

private:
    std::vector<double> times_;
    std::vector<RealVector> x_, y_;
};

/// Spray coefficients alone (no connection tables): the geodesic right-hand
/// side only needs Ghat^k = (1/4) g^{kl} (d2F2/dx^a dy^l y^a - dF2/dx^l).
Eigen::VectorXd spray_only(const MetricDefinition& metric, const PointState& p, DerivativeMode mode) {
    PartialTable table(metric, p, mode);
    const int n = p.n;
    const int d = 2 * n;
    Eigen::MatrixXd g(d, d);
    Eigen::VectorXd H(d);
    for (int l = 0; l < d; ++l) {
        for (int k = l; k < d; ++k) {
            const double value = 0.5 * table.real_partial({RealDir::fiber(l, n), RealDir::fiber(k, n)});
            g(l, k) = value;
            g(k, l) = value;
        }
        double h = -table.real_partial({RealDir::base(l)});
        for (int a = 0; a < d; ++a)
            h += table.real_partial({RealDir::base(a), RealDir::fiber(l, n)}) * p.y[a];
        H[l] = h;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw SingularMetricError("geodesic right-hand side: fundamental tensor not positive", 0.0,
                                  std::numeric_limits<double>::infinity());
    return 0.25 * ldlt.solve(H);
}

/// Transport matrix A^k_l(t) = Gammahat^k_{l;j}(sigma; sigmadot) sigmadot^j.
Eigen::MatrixXd transport_matrix(const MetricDefinition& metric, const RealVector& x,
                                 const RealVector& dx, DerivativeMode mode) {
    PointEvaluation ev(metric, PointState::from_real(x, dx), mode);
    const auto& horizontal = ev.cartan().horizontal;
    const int d = static_cast<int>(x.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += horizontal(k, l, j) * dx[j];
            A(k, l) = acc;
        }
    return A;
}

struct GeodesicState {
    RealVector x, y;
};

GeodesicState rk4_geodesic_step(const MetricDefinition& metric, const GeodesicState& s, double h,
                                DerivativeMode mode) {
    auto rhs = [&metric, mode](const GeodesicState& q) {
        const Eigen::VectorXd spray = spray_only(metric, PointState::from_real(q.x, q.y), mode);
        return GeodesicState{q.y, -2.0 * spray};
    };
    const GeodesicState k1 = rhs(s);
    const GeodesicState k2 = rhs({s.x + 0.5 * h * k1.x, s.y + 0.5 * h * k1.y});
    const GeodesicState k3 = rhs({s.x + 0.5 * h * k2.x, s.y + 0.5 * h * k2.y});
    const GeodesicState k4 = rhs({s.x + h * k3.x, s.y + h * k3.y});
    return {s.x + (h / 6.0) * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
            s.y + (h / 6.0) * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
}

} // namespace

std::unique_ptr<Curve> Curve::line(const RealVector& x0, const RealVector& velocity, double T) {
    return std::make_unique<LineCurve>(x0, velocity, T);
}

std::unique_ptr<Curve> Curve::from_trajectory(const TrajectoryRecord& record) {
    return std::make_unique<InterpolatedCurve>(record.times, record.positions, record.velocities);
}

TrajectoryRecord integrate_geodesic(const MetricDefinition& metric, const RealVector& x0,
                                    const RealVector& y0, double T, int steps,
                                    const IntegratorOptions& options) {
    if (steps < 10) throw ParamError("integrate_geodesic requires steps >= 10");
    if (!(T > 0.0)) throw ParamError("integrate_geodesic requires T > 0");

    const double h = T / steps;
    TrajectoryRecord record;
    record.times.reserve(steps + 1);
    record.positions.reserve(steps + 1);
    record.velocities.reserve(steps + 1);
    record.energy.reserve(steps + 1);

    GeodesicState state{x0, y0};
    auto push = [&](double t, const GeodesicState& s) {
        record.times.push_back(t);
        record.positions.push_back(s.x);
        record.velocities.push_back(s.y);
        const PointState p = PointState::from_real(s.x, s.y);
        record.energy.push_back(evaluate_f2(metric, p.z, p.v));
    };
    push(0.0, state);

    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        try {
            const GeodesicState full = rk4_geodesic_step(metric, state, h, DerivativeMode::jet);
            if (options.error_check) {
                const GeodesicState half = rk4_geodesic_step(metric, state, 0.5 * h, DerivativeMode::jet);
                const GeodesicState twice = rk4_geodesic_step(metric, half, 0.5 * h, DerivativeMode::jet);
                const double err = std::max((full.x - twice.x).cwiseAbs().maxCoeff(),
                                            (full.y - twice.y).cwiseAbs().maxCoeff());
                record.max_step_error = std::max(record.max_step_error, err);
                if (err > options.error_bound)
                    throw StiffnessError("step-doubling error estimate " + std::to_string(err) +
                                         " exceeds bound at t=" + std::to_string(t));
            }
            state = full;
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (geodesic leaves the domain near t=" +
                              std::to_string(t + h) + ")");
        }
        push((i + 1) * h, state);
    }

    for (double e : record.energy)
        record.energy_drift = std::max(record.energy_drift, std::abs(e - record.energy.front()));
    return record;
}

TransportResult parallel_transport(const MetricDefinition& metric, const Curve& curve,
                                   const ComplexifiedVector& seed, int steps, DerivativeMode mode) {
    if (steps < 10) throw ParamError("parallel_transport requires steps >= 10");
    const double T = curve.duration();
    const double h = T / steps;
    const int d = static_cast<int>(seed.size());

    // The transport equation is linear with a time-dependent matrix, so the
    // stage matrices depend only on the half-grid times; the k4 matrix of one
    // step is the k1 matrix of the next.
    RealVector pos(d), vel(d);
    auto matrix_at = [&](double t) {
        curve.eval(t, pos, vel);
        try {
            return transport_matrix(metric, pos, vel, mode);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (transport leaves the domain near t=" +
                              std::to_string(t) + ")");
        }
    };

    TransportResult result;
    result.times.reserve(steps + 1);
    result.vectors.reserve(steps + 1);

    ComplexifiedVector V = seed;
    auto push = [&](double t, const ComplexifiedVector& value) {
        result.times.push_back(t);
        result.vectors.push_back(value);
        result.type01_norm.push_back(type01_part(value).norm());
        curve.eval(t, pos, vel);
        PointEvaluation ev(metric, PointState::from_real(pos, vel), mode);
        result.metric_value.push_back(
            bilinear_inner(ev, value, ComplexifiedVector(value.conjugate())).real());
    };
    push(0.0, V);

    Eigen::MatrixXd A_left = matrix_at(0.0);
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const Eigen::MatrixXd A_mid = matrix_at(t + 0.5 * h);
        const Eigen::MatrixXd A_right = matrix_at(t + h);
        const ComplexifiedVector k1 = -(A_left * V);
        const ComplexifiedVector k2 = -(A_mid * (V + 0.5 * h * k1));
        const ComplexifiedVector k3 = -(A_mid * (V + 0.5 * h * k2));
        const ComplexifiedVector k4 = -(A_right * (V + h * k3));
        V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        A_left = A_right;
        push((i + 1) * h, V);
    }
    return result;
}

double type_preservation_residual(const MetricDefinition& metric, const Curve& curve,
                                  const ComplexVector& seed10, int steps, DerivativeMode mode) {
    const double scale = seed10.norm();
    if (scale < kVMin) throw DomainError("type-preservation seed is numerically zero");
    const TransportResult result = parallel_transport(metric, curve, embed_type10(seed10), steps, mode);
    double worst = 0.0;
    for (double r : result.type01_norm) worst = std::max(worst, r);
    return worst / scale;
}

double j_commutation_residual(const MetricDefinition& metric, const Curve& curve,
                              const RealVector& seed, int steps, DerivativeMode mode) {
    const double scale = seed.norm();
    if (scale < kVMin) throw DomainError("J-commutation seed is numerically zero");
    const auto direct = parallel_transport(metric, curve, seed.cast<std::complex<double>>(), steps, mode);
    const auto rotated =
        parallel_transport(metric, curve, apply_J(seed).cast<std::complex<double>>(), steps, mode);
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.vectors.size(); ++i) {
        const ComplexifiedVector deviation = rotated.vectors[i] - apply_J(direct.vectors[i]);
        worst = std::max(worst, deviation.cwiseAbs().maxCoeff());
    }
    return worst / scale;
}

} // namespace finsler
