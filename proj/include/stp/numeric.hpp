#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace stp {

/// ~330-bit binary float. Used where the geometric probe offset of the
/// directional schedule shrinks below double resolution.
using ExtendedReal = boost::multiprecision::cpp_bin_float_100;

template <class Real>
using Vec = std::vector<Real>;

enum class Precision { Double, Extended };

std::string_view to_string(Precision p);
Precision parse_precision(std::string_view name);

template <class Real>
double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <class Real>
Real dot(std::span<const Real> a, std::span<const Real> b) {
    Real acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <class Real>
Real norm2(std::span<const Real> a) {
    using std::sqrt;
    return sqrt(dot(a, a));
}

template <class Real>
bool all_finite(std::span<const Real> a) {
    using std::isfinite;
    for (const auto& x : a)
        if (!isfinite(x)) return false;
    return true;
}

/// out = base + scale * dir
template <class Real>
void axpy_into(std::span<const Real> base, const Real& scale, std::span<const Real> dir,
               std::span<Real> out) {
    for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + scale * dir[i];
}

template <class Real>
Vec<Real> convert_vector(std::span<const double> v) {
    return Vec<Real>(v.begin(), v.end());
}

template <class Real>
std::vector<double> to_double_vector(std::span<const Real> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
}

}  // namespace stp
