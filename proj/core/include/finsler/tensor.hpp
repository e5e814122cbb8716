#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace finsler {

template <typename T>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int d0, int d1, int d2) : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, T{}) {}

    T& operator()(int i, int j, int k) { return data_[(i * d1_ + j) * d2_ + k]; }
    const T& operator()(int i, int j, int k) const { return data_[(i * d1_ + j) * d2_ + k]; }

    int dim0() const { return d0_; }
    int dim1() const { return d1_; }
    int dim2() const { return d2_; }

    double max_abs() const {
        double m = 0.0;
        for (const T& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
        return m;
    }

private:
    int d0_ = 0, d1_ = 0, d2_ = 0;
    std::vector<T> data_;
};

template <typename T>
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int d0, int d1, int d2, int d3)
        : d0_(d0), d1_(d1), d2_(d2), d3_(d3), data_(d0 * d1 * d2 * d3, T{}) {}

    T& operator()(int i, int j, int k, int l) { return data_[((i * d1_ + j) * d2_ + k) * d3_ + l]; }
    const T& operator()(int i, int j, int k, int l) const {
        return data_[((i * d1_ + j) * d2_ + k) * d3_ + l];
    }

    int dim0() const { return d0_; }
    int dim1() const { return d1_; }
    int dim2() const { return d2_; }
    int dim3() const { return d3_; }

    double max_abs() const {
        double m = 0.0;
        for (const T& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
        return m;
    }

private:
    int d0_ = 0, d1_ = 0, d2_ = 0, d3_ = 0;
    std::vector<T> data_;
};

using Tensor3d = Tensor3<double>;
using Tensor3c = Tensor3<std::complex<double>>;
using Tensor4d = Tensor4<double>;
using Tensor4c = Tensor4<std::complex<double>>;

} // namespace finsler
