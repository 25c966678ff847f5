#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace formslab {

using Exponents = std::vector<unsigned>;

struct Term {
    Exponents exponents;
    double coeff = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Real matrix with det = 1, stored row-major.
class UnimodularMatrix {
public:
    // Throws InputError unless the rows form a square matrix with
    // |det - 1| <= 1e-9.
    static UnimodularMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static UnimodularMatrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> entries() const { return entries_; }

    // y = g x
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    double determinant() const;
    double operator_norm() const;

    friend UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b);

private:
    UnimodularMatrix(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {}
    std::size_t n_ = 0;
    std::vector<double> entries_;
};

/// Homogeneous polynomial of degree d in n variables, kept as sparse terms
/// sorted lexicographically by exponent vector. Duplicate exponents are
/// merged and zero coefficients dropped at construction.
class HomogeneousForm {
public:
    // Throws InputError if n == 0, d == 0, or a term has the wrong length or
    // total degree.
    HomogeneousForm(std::size_t n, unsigned degree, std::vector<Term> terms);

    // Infers the degree from the first term; the term list must be nonempty.
    static HomogeneousForm from_terms(std::size_t n, std::vector<Term> terms);

    std::size_t n() const { return n_; }
    unsigned degree() const { return degree_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend bool operator==(const HomogeneousForm&, const HomogeneousForm&) = default;

private:
    std::size_t n_;
    unsigned degree_;
    std::vector<Term> terms_;
};

/// The tuple F = (F_1, ..., F_p); all members share n and d.
class FormSystem {
public:
    explicit FormSystem(std::vector<HomogeneousForm> forms);
    FormSystem(HomogeneousForm form);  // NOLINT(google-explicit-constructor)

    std::size_t n() const { return forms_.front().n(); }
    unsigned degree() const { return forms_.front().degree(); }
    std::size_t size() const { return forms_.size(); }
    const std::vector<HomogeneousForm>& forms() const { return forms_; }
    const HomogeneousForm& operator[](std::size_t i) const { return forms_[i]; }

private:
    std::vector<HomogeneousForm> forms_;
};

double evaluate(const HomogeneousForm& form, std::span<const double> x);

// Euclidean norm of (F_1(x), ..., F_p(x)).
double system_norm(const FormSystem& system, std::span<const double> x);

// P_F = F_1^2 + ... + F_p^2, expanded.
HomogeneousForm squared_norm_form(const FormSystem& system);

std::vector<double> gradient(const HomogeneousForm& form, std::span<const double> x);

// (F o g)(x) = F(g x), expanded.
HomogeneousForm compose(const HomogeneousForm& form, const UnimodularMatrix& g);
FormSystem compose(const FormSystem& system, const UnimodularMatrix& g);

// Per point: do the p gradients have full rank p? Singular values below
// 1e-9 times the largest count as zero; a vanishing Jacobian is rank 0.
std::vector<bool> smooth_ci_check(const FormSystem& system, const std::vector<std::vector<double>>& points);

// ---- text / JSON syntax ----

// Parses `coeff * x1^a1 ... xn^an` terms joined by + and -. Factors may be
// separated by `*` or whitespace. `n` = 0 infers the variable count from the
// largest index used.
HomogeneousForm parse_form(const std::string& text, std::size_t n = 0);

// Systems in text form separate their members with `;`.
FormSystem parse_system(const std::string& text, std::size_t n = 0);

std::string to_string(const HomogeneousForm& form);
std::string to_string(const FormSystem& system);

// JSON array of {"exponents": [...], "coeff": number}.
std::string form_to_json(const HomogeneousForm& form);
HomogeneousForm form_from_json(const std::string& json);

// JSON array of forms.
std::string system_to_json(const FormSystem& system);
FormSystem system_from_json(const std::string& json);

}  // namespace formslab
