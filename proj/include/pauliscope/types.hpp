// types.hpp: shared aliases, tolerances and the exception hierarchy

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace pauliscope {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Vector4cd;
using CMat4 = Eigen::Matrix4cd;

/// Components of a Pauli vector, s = <sigma> or t = <tau>.
using BlochVector = Vec3;
/// C_ab = <sigma_a tau_b>.
using CrossDyadic = Mat3;

inline constexpr double default_tol = 1e-9;

/// Base of every error thrown by the library. `kind()` is a stable tag used
/// by the CLI to map failures onto exit codes.
class error : public std::runtime_error {
public:
    enum class kind { invalid_input, domain, invalid_state, no_real_roots, diagnostics, parse, io };

    error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    kind code() const noexcept { return kind_; }

private:
    kind kind_;
};

/// Malformed numeric input: non-finite entries, non-Hermitian or wrong-trace matrices.
class invalid_input : public error {
public:
    explicit invalid_input(const std::string& what, double defect = 0.0)
        : error(kind::invalid_input, what), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(kind::domain, what) {}
};

/// Raised by operations that require a positive (or separable) state.
class invalid_state : public error {
public:
    explicit invalid_state(const std::string& what) : error(kind::invalid_state, what) {}
};

class no_real_roots : public error {
public:
    explicit no_real_roots(const std::string& what) : error(kind::no_real_roots, what) {}
};

/// Two independent numerical routes disagreed; the input sits in a
/// pathological region or the arithmetic broke down.
class diagnostics_error : public error {
public:
    explicit diagnostics_error(const std::string& what) : error(kind::diagnostics, what) {}
};

/// Malformed document or command line.
class parse_error : public error {
public:
    explicit parse_error(const std::string& what) : error(kind::parse, what) {}
};

class io_error : public error {
public:
    explicit io_error(const std::string& what) : error(kind::io, what) {}
};

} // namespace pauliscope
