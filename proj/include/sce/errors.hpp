#pragma once

#include <stdexcept>
#include <string>

namespace sce {

struct modulus_mismatch : std::invalid_argument {
    explicit modulus_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct not_invertible : std::domain_error {
    explicit not_invertible(const std::string& what) : std::domain_error(what) {}
};

struct insufficient_slopes : std::domain_error {
    explicit insufficient_slopes(const std::string& what) : std::domain_error(what) {}
};

struct even_modulus : std::domain_error {
    explicit even_modulus(const std::string& what) : std::domain_error(what) {}
};

struct oracle_too_large : std::length_error {
    explicit oracle_too_large(const std::string& what) : std::length_error(what) {}
};

struct invalid_epsilon : std::invalid_argument {
    explicit invalid_epsilon(const std::string& what) : std::invalid_argument(what) {}
};

struct band_count_mismatch : std::invalid_argument {
    explicit band_count_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct same_line : std::invalid_argument {
    explicit same_line(const std::string& what) : std::invalid_argument(what) {}
};

struct non_transversal_probe : std::invalid_argument {
    explicit non_transversal_probe(const std::string& what) : std::invalid_argument(what) {}
};

struct wrong_probe_kind : std::invalid_argument {
    explicit wrong_probe_kind(const std::string& what) : std::invalid_argument(what) {}
};

struct param_mismatch : std::invalid_argument {
    explicit param_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct off_grid : std::invalid_argument {
    explicit off_grid(const std::string& what) : std::invalid_argument(what) {}
};

struct invalid_modulus : std::invalid_argument {
    explicit invalid_modulus(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace sce
