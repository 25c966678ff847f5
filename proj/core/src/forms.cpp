#include "formslab/forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <map>
#include <numeric>
#include <nlohmann/json.hpp>

#include "formslab/errors.hpp"

namespace formslab {

namespace {

using TermMap = std::map<Exponents, double>;

void require_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got)
        throw InputError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                         ", got " + std::to_string(got) + ")");
}

std::vector<Term> to_terms(const TermMap& map) {
    std::vector<Term> terms;
    terms.reserve(map.size());
    for (const auto& [e, c] : map)
        if (c != 0.0) terms.push_back({e, c});
    return terms;
}

// Multiply a polynomial by the linear form sum_j row[j] x_j, skipping zero
// entries so that composing with the identity reproduces coefficients exactly.
TermMap multiply_linear(const TermMap& poly, std::span<const double> row) {
    TermMap out;
    for (const auto& [e, c] : poly) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0.0) continue;
            Exponents next = e;
            ++next[j];
            out[next] += c * row[j];
        }
    }
    return out;
}

Eigen::MatrixXd as_eigen(const UnimodularMatrix& g) {
    const std::size_t n = g.dim();
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = g(i, j);
    return m;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

// ---------------------------------------------------------------- matrix

UnimodularMatrix UnimodularMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw InputError("unimodular matrix: empty");
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
        require_dim(n, row.size(), "unimodular matrix row");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    UnimodularMatrix g(n, std::move(entries));
    const double det = g.determinant();
    if (!(std::abs(det - 1.0) <= 1e-9))
        throw InputError("unimodular matrix: |det - 1| = " + format_double(std::abs(det - 1.0)) + " exceeds 1e-9");
    return g;
}

UnimodularMatrix UnimodularMatrix::identity(std::size_t n) {
    if (n == 0) throw InputError("unimodular matrix: empty");
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = 1.0;
    return {n, std::move(entries)};
}

void UnimodularMatrix::apply(std::span<const double> x, std::span<double> y) const {
    require_dim(n_, x.size(), "matrix apply");
    require_dim(n_, y.size(), "matrix apply");
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += entries_[i * n_ + j] * x[j];
        y[i] = s;
    }
}

std::vector<double> UnimodularMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(n_);
    apply(x, y);
    return y;
}

double UnimodularMatrix::determinant() const { return as_eigen(*this).determinant(); }

double UnimodularMatrix::operator_norm() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_eigen(*this));
    return svd.singularValues()(0);
}

UnimodularMatrix operator*(const UnimodularMatrix& a, const UnimodularMatrix& b) {
    require_dim(a.n_, b.n_, "matrix product");
    const std::size_t n = a.n_;
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i * n + j] += a(i, k) * b(k, j);
    return {n, std::move(out)};
}

// ---------------------------------------------------------------- forms

HomogeneousForm::HomogeneousForm(std::size_t n, unsigned degree, std::vector<Term> terms)
    : n_(n), degree_(degree) {
    if (n == 0) throw InputError("form: need at least one variable");
    if (degree == 0) throw InputError("form: degree must be at least 1");
    TermMap merged;
    for (auto& t : terms) {
        require_dim(n, t.exponents.size(), "form term");
        const unsigned total = std::accumulate(t.exponents.begin(), t.exponents.end(), 0U);
        if (total != degree)
            throw InputError("form: term of degree " + std::to_string(total) + " in a form of degree " +
                             std::to_string(degree));
        if (!std::isfinite(t.coeff)) throw InputError("form: non-finite coefficient");
        merged[std::move(t.exponents)] += t.coeff;
    }
    terms_ = to_terms(merged);
}

HomogeneousForm HomogeneousForm::from_terms(std::size_t n, std::vector<Term> terms) {
    if (terms.empty()) throw InputError("form: empty term list, degree unknown");
    const unsigned d = std::accumulate(terms.front().exponents.begin(), terms.front().exponents.end(), 0U);
    return {n, d, std::move(terms)};
}

FormSystem::FormSystem(std::vector<HomogeneousForm> forms) : forms_(std::move(forms)) {
    if (forms_.empty()) throw InputError("form system: needs at least one form");
    for (const auto& f : forms_) {
        if (f.n() != forms_.front().n()) throw InputError("form system: members differ in variable count");
        if (f.degree() != forms_.front().degree()) throw InputError("form system: members differ in degree");
    }
}

FormSystem::FormSystem(HomogeneousForm form) : FormSystem(std::vector<HomogeneousForm>{std::move(form)}) {}

double evaluate(const HomogeneousForm& form, std::span<const double> x) {
    require_dim(form.n(), x.size(), "evaluate");
    double sum = 0.0;
    for (const auto& t : form.terms()) {
        double prod = t.coeff;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (unsigned k = 0; k < t.exponents[i]; ++k) prod *= x[i];
        sum += prod;
    }
    return sum;
}

double system_norm(const FormSystem& system, std::span<const double> x) {
    if (system.size() == 1) return std::abs(evaluate(system[0], x));
    double sq = 0.0;
    for (const auto& f : system.forms()) {
        const double v = evaluate(f, x);
        sq += v * v;
    }
    return std::sqrt(sq);
}

HomogeneousForm squared_norm_form(const FormSystem& system) {
    TermMap acc;
    for (const auto& f : system.forms()) {
        for (const auto& a : f.terms()) {
            for (const auto& b : f.terms()) {
                Exponents e(system.n());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exponents[i] + b.exponents[i];
                acc[std::move(e)] += a.coeff * b.coeff;
            }
        }
    }
    return {system.n(), 2 * system.degree(), to_terms(acc)};
}

std::vector<double> gradient(const HomogeneousForm& form, std::span<const double> x) {
    require_dim(form.n(), x.size(), "gradient");
    std::vector<double> g(x.size(), 0.0);
    for (const auto& t : form.terms()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (t.exponents[i] == 0) continue;
            double prod = t.coeff * t.exponents[i];
            for (std::size_t j = 0; j < x.size(); ++j) {
                const unsigned k = j == i ? t.exponents[j] - 1 : t.exponents[j];
                for (unsigned r = 0; r < k; ++r) prod *= x[j];
            }
            g[i] += prod;
        }
    }
    return g;
}

HomogeneousForm compose(const HomogeneousForm& form, const UnimodularMatrix& g) {
    require_dim(form.n(), g.dim(), "compose");
    const std::size_t n = form.n();
    TermMap acc;
    for (const auto& t : form.terms()) {
        TermMap poly{{Exponents(n, 0U), t.coeff}};
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned k = 0; k < t.exponents[i]; ++k)
                poly = multiply_linear(poly, g.entries().subspan(i * n, n));
        for (const auto& [e, c] : poly) acc[e] += c;
    }
    return {n, form.degree(), to_terms(acc)};
}

FormSystem compose(const FormSystem& system, const UnimodularMatrix& g) {
    std::vector<HomogeneousForm> out;
    out.reserve(system.size());
    for (const auto& f : system.forms()) out.push_back(compose(f, g));
    return FormSystem(std::move(out));
}

std::vector<bool> smooth_ci_check(const FormSystem& system, const std::vector<std::vector<double>>& points) {
    const std::size_t p = system.size();
    const std::size_t n = system.n();
    if (p > n) throw InputError("smooth_ci_check: more forms than variables");
    std::vector<bool> out;
    out.reserve(points.size());
    Eigen::MatrixXd jac(p, n);
    for (const auto& x : points) {
        for (std::size_t i = 0; i < p; ++i) {
            const auto g = gradient(system[i], x);
            for (std::size_t j = 0; j < n; ++j) jac(i, j) = g[j];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
        const auto& s = svd.singularValues();
        const double largest = s.size() ? s(0) : 0.0;
        std::size_t rank = 0;
        if (largest > 0.0)
            for (Eigen::Index k = 0; k < s.size(); ++k)
                if (s(k) >= 1e-9 * largest) ++rank;
        out.push_back(rank == p);
    }
    return out;
}

// ---------------------------------------------------------------- text syntax

namespace {

class FormParser {
public:
    explicit FormParser(std::string_view text) : s_(text) {}

    // Returns the raw terms and the largest variable index seen.
    std::vector<std::pair<std::map<std::size_t, unsigned>, double>> parse() {
        std::vector<std::pair<std::map<std::size_t, unsigned>, double>> terms;
        skip_ws();
        if (at_end()) fail("empty form");
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = get() == '-' ? -1.0 : 1.0;
            skip_ws();
        }
        for (;;) {
            terms.push_back(parse_term(sign));
            skip_ws();
            if (at_end()) break;
            const char c = get();
            if (c != '+' && c != '-') fail(std::string("unexpected '") + c + "'");
            sign = c == '-' ? -1.0 : 1.0;
            skip_ws();
        }
        return terms;
    }

    std::size_t max_index() const { return max_index_; }

private:
    std::pair<std::map<std::size_t, unsigned>, double> parse_term(double sign) {
        double coeff = sign;
        std::map<std::size_t, unsigned> powers;
        bool any = false;
        for (;;) {
            skip_ws();
            if (at_end()) break;
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                coeff *= parse_number();
            } else if (c == 'x' || c == 'X') {
                ++pos_;
                const std::size_t idx = parse_uint();
                if (idx == 0) fail("variables are numbered from x1");
                unsigned power = 1;
                skip_ws();
                if (!at_end() && peek() == '^') {
                    ++pos_;
                    skip_ws();
                    power = static_cast<unsigned>(parse_uint());
                }
                powers[idx] += power;
                max_index_ = std::max(max_index_, idx);
            } else {
                break;
            }
            any = true;
            skip_ws();
            if (!at_end() && peek() == '*') {
                ++pos_;
                continue;
            }
        }
        if (!any) fail("expected a term");
        return {powers, coeff};
    }

    double parse_number() {
        const char* begin = s_.data() + pos_;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("bad number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    std::size_t parse_uint() {
        const char* begin = s_.data() + pos_;
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("expected an integer");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char get() { return s_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("form syntax: " + msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) +
                         "\"");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t max_index_ = 0;
};

HomogeneousForm build_form(const std::vector<std::pair<std::map<std::size_t, unsigned>, double>>& raw,
                           std::size_t n) {
    std::vector<Term> terms;
    for (const auto& [powers, coeff] : raw) {
        Exponents e(n, 0U);
        for (const auto& [idx, k] : powers) {
            if (idx > n) throw InputError("form syntax: x" + std::to_string(idx) + " exceeds n = " + std::to_string(n));
            e[idx - 1] += k;
        }
        terms.push_back({std::move(e), coeff});
    }
    return HomogeneousForm::from_terms(n, std::move(terms));
}

std::vector<std::string> split_members(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t semi = text.find(';', start);
        parts.push_back(text.substr(start, semi - start));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return parts;
}

}  // namespace

HomogeneousForm parse_form(const std::string& text, std::size_t n) {
    FormParser parser(text);
    auto raw = parser.parse();
    if (n == 0) n = parser.max_index();
    if (n == 0) throw InputError("form syntax: constant forms are not homogeneous of positive degree");
    return build_form(raw, n);
}

FormSystem parse_system(const std::string& text, std::size_t n) {
    std::vector<std::vector<std::pair<std::map<std::size_t, unsigned>, double>>> raws;
    std::size_t max_index = 0;
    for (const auto& part : split_members(text)) {
        FormParser parser(part);
        raws.push_back(parser.parse());
        max_index = std::max(max_index, parser.max_index());
    }
    if (n == 0) n = max_index;
    if (n == 0) throw InputError("form syntax: constant forms are not homogeneous of positive degree");
    std::vector<HomogeneousForm> forms;
    for (const auto& raw : raws) forms.push_back(build_form(raw, n));
    return FormSystem(std::move(forms));
}

std::string to_string(const HomogeneousForm& form) {
    if (form.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : form.terms()) {
        double c = t.coeff;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        c = std::abs(c);
        bool need_star = false;
        if (c != 1.0) {
            out += format_double(c);
            need_star = true;
        }
        for (std::size_t i = 0; i < t.exponents.size(); ++i) {
            if (t.exponents[i] == 0) continue;
            if (need_star) out += "*";
            out += "x" + std::to_string(i + 1);
            if (t.exponents[i] > 1) out += "^" + std::to_string(t.exponents[i]);
            need_star = true;
        }
        first = false;
    }
    return out;
}

std::string to_string(const FormSystem& system) {
    std::string out;
    for (std::size_t i = 0; i < system.size(); ++i) {
        if (i) out += "; ";
        out += to_string(system[i]);
    }
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {

nlohmann::json form_json(const HomogeneousForm& form) {
    auto arr = nlohmann::json::array();
    for (const auto& t : form.terms()) arr.push_back({{"exponents", t.exponents}, {"coeff", t.coeff}});
    return arr;
}

HomogeneousForm form_from(const nlohmann::json& arr) {
    if (!arr.is_array() || arr.empty()) throw InputError("form JSON: expected a nonempty array of terms");
    std::vector<Term> terms;
    std::size_t n = 0;
    for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("exponents") || !item.contains("coeff"))
            throw InputError("form JSON: each term needs \"exponents\" and \"coeff\"");
        Term t;
        try {
            t.exponents = item.at("exponents").get<Exponents>();
            t.coeff = item.at("coeff").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("form JSON: ") + e.what());
        }
        if (n == 0) n = t.exponents.size();
        terms.push_back(std::move(t));
    }
    return HomogeneousForm::from_terms(n, std::move(terms));
}

nlohmann::json parse_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("JSON: ") + e.what());
    }
}

}  // namespace

std::string form_to_json(const HomogeneousForm& form) { return form_json(form).dump(); }

HomogeneousForm form_from_json(const std::string& json) { return form_from(parse_json(json)); }

std::string system_to_json(const FormSystem& system) {
    auto arr = nlohmann::json::array();
    for (const auto& f : system.forms()) arr.push_back(form_json(f));
    return arr.dump();
}

FormSystem system_from_json(const std::string& json) {
    const auto doc = parse_json(json);
    if (!doc.is_array() || doc.empty()) throw InputError("system JSON: expected a nonempty array");
    // A bare term array is accepted as a one-form system.
    if (doc.front().is_object()) return FormSystem(form_from(doc));
    std::vector<HomogeneousForm> forms;
    for (const auto& f : doc) forms.push_back(form_from(f));
    return FormSystem(std::move(forms));
}

}  // namespace formslab
