#pragma once

// Elliptic integrals of the first and second kind and the Jacobi elliptic
// functions, for real arguments and modulus 0 <= p <= 1.

namespace sphcurve::specfun {

struct EllipticModulus {
    double p = 0.0;
    double p_prime = 1.0;

    EllipticModulus() = default;
    // Throws std::invalid_argument when p is outside [0, 1]. NaN is accepted
    // and propagates through every function below.
    explicit EllipticModulus(double modulus);
};

struct JacobiTriple {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
    double am = 0.0;
};

// K(p) by the arithmetic-geometric mean. Throws std::domain_error for p = 1.
double complete_K(const EllipticModulus& m);

// E(p) = E(pi/2, p); equals 1 at p = 1.
double complete_E(const EllipticModulus& m);

// F(phi, p). For p = 1 only |phi| < pi/2 is meaningful; other phi throw
// std::domain_error.
double incomplete_F(double phi, const EllipticModulus& m);

// E(phi, p), quasi-periodic: E(phi + pi) = E(phi) + 2 E(p).
double incomplete_E(double phi, const EllipticModulus& m);

// sn, cn, dn and the amplitude at argument u.
JacobiTriple jacobi(double u, const EllipticModulus& m);

// Inverse of phi -> E(phi, p): the phi with E(phi, p) = value.
double inverse_incomplete_E(double value, const EllipticModulus& m);

}  // namespace sphcurve::specfun
