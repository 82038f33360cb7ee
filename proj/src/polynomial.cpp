#include "focir/polynomial.hpp"

#include <algorithm>

namespace focir {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial Polynomial::monomial(double c, std::size_t power) {
    std::vector<double> v(power + 1, 0.0);
    v[power] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
}

std::size_t Polynomial::degree() const noexcept {
    return coeffs_.empty() ? 0 : coeffs_.size() - 1;
}

double Polynomial::operator[](std::size_t power) const noexcept {
    return power < coeffs_.size() ? coeffs_[power] : 0.0;
}

std::complex<double> Polynomial::evaluate(std::complex<double> z) const noexcept {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

Polynomial poly_mul(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() || q.is_zero()) {
        return {};
    }
    const auto a = p.coeffs();
    const auto b = q.coeffs();
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial poly_add(const Polynomial& p, const Polynomial& q) {
    std::vector<double> out(std::max(p.coeffs().size(), q.coeffs().size()), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = p[i] + q[i];
    }
    return Polynomial(std::move(out));
}

Polynomial poly_scale(const Polynomial& p, double c) {
    std::vector<double> out(p.coeffs().begin(), p.coeffs().end());
    for (double& v : out) v *= c;
    return Polynomial(std::move(out));
}

}  // namespace focir
