#pragma once

#include <stdexcept>
#include <string>

namespace weylab {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Lattice basis singular or otherwise unusable.
struct invalid_lattice : error {
    explicit invalid_lattice(const std::string& what) : error(what) {}
};

// An operation needed spectral data beyond the enumerated range.
struct incomplete_spectrum : error {
    explicit incomplete_spectrum(const std::string& what) : error(what) {}
};

// Argument outside the mathematical domain of the operation.
struct domain_error : error {
    explicit domain_error(const std::string& what) : error(what) {}
};

// A stated precondition was violated (caller bug, not data).
struct precondition_error : error {
    explicit precondition_error(const std::string& what) : error(what) {}
};

// A quadrature or iteration hit its work cap before reaching the requested
// tolerance.  Carries the bound that was actually achieved.
struct accuracy_error : error {
    double requested;
    double achieved;
    accuracy_error(const std::string& what, double requested_, double achieved_)
        : error(what + " (requested " + std::to_string(requested_) +
                ", achieved " + std::to_string(achieved_) + ")"),
          requested(requested_), achieved(achieved_) {}
};

// A fit had no well-defined answer (e.g. all-zero input series).
struct fit_error : error {
    explicit fit_error(const std::string& what) : error(what) {}
};

} // namespace weylab
