#include "detail/gmres.hpp"

namespace osm::detail {

namespace {

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

} // namespace

GmresResult gmres(
    const std::function<void(const std::vector<Complex>&, std::vector<Complex>&)>& apply,
    const std::vector<Complex>& b, std::vector<Complex>& x, double tol, int restart,
    int max_iterations) {
    const std::size_t n = b.size();
    x.assign(n, Complex(0.0));
    GmresResult result;

    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        result.converged = true;
        return result;
    }

    std::vector<Complex> r = b; // residual for x = 0
    std::vector<Complex> w(n);
    const int m = restart;
    std::vector<std::vector<Complex>> V(m + 1, std::vector<Complex>(n));
    std::vector<Complex> H((m + 1) * m, Complex(0.0));
    std::vector<double> cs(m, 0.0);
    std::vector<Complex> sn(m, Complex(0.0));
    std::vector<Complex> g(m + 1, Complex(0.0));
    auto h = [&H, m](int i, int j) -> Complex& { return H[static_cast<std::size_t>(i) * m + j]; };

    while (true) {
        const double beta = norm2(r);
        result.relative_residual = beta / bnorm;
        if (result.relative_residual <= tol) {
            result.converged = true;
            return result;
        }
        if (result.iterations >= max_iterations) return result;

        for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), Complex(0.0));
        g[0] = beta;

        int used = 0;
        for (int j = 0; j < m && result.iterations < max_iterations; ++j) {
            apply(V[j], w);
            ++result.iterations;
            for (int i = 0; i <= j; ++i) {
                const Complex hij = inner(V[i], w);
                h(i, j) = hij;
                for (std::size_t t = 0; t < n; ++t) w[t] -= hij * V[i][t];
            }
            const double hj1 = norm2(w);
            h(j + 1, j) = hj1;
            if (hj1 > 0.0)
                for (std::size_t t = 0; t < n; ++t) V[j + 1][t] = w[t] / hj1;

            // Apply accumulated rotations to the new column, then zero the
            // subdiagonal with a fresh one.
            for (int i = 0; i < j; ++i) {
                const Complex t1 = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                const Complex t2 = -std::conj(sn[i]) * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t1;
                h(i + 1, j) = t2;
            }
            {
                const Complex a = h(j, j);
                const double bb = std::abs(h(j + 1, j));
                const double rho = std::sqrt(std::norm(a) + bb * bb);
                if (rho == 0.0) {
                    cs[j] = 1.0;
                    sn[j] = 0.0;
                } else if (std::abs(a) == 0.0) {
                    cs[j] = 0.0;
                    sn[j] = 1.0;
                } else {
                    cs[j] = std::abs(a) / rho;
                    sn[j] = (a / std::abs(a)) * std::conj(h(j + 1, j)) / rho;
                }
                h(j, j) = cs[j] * a + sn[j] * h(j + 1, j);
                h(j + 1, j) = 0.0;
                const Complex g1 = cs[j] * g[j] + sn[j] * g[j + 1];
                const Complex g2 = -std::conj(sn[j]) * g[j] + cs[j] * g[j + 1];
                g[j] = g1;
                g[j + 1] = g2;
            }
            used = j + 1;
            if (std::abs(g[j + 1]) / bnorm <= 0.5 * tol) break;
            if (hj1 == 0.0) break; // happy breakdown
        }

        // Back-substitution and solution update.
        std::vector<Complex> y(used, Complex(0.0));
        for (int i = used - 1; i >= 0; --i) {
            Complex s = g[i];
            for (int j2 = i + 1; j2 < used; ++j2) s -= h(i, j2) * y[j2];
            y[i] = s / h(i, i);
        }
        for (int j2 = 0; j2 < used; ++j2)
            for (std::size_t t = 0; t < n; ++t) x[t] += y[j2] * V[j2][t];

        apply(x, w);
        for (std::size_t t = 0; t < n; ++t) r[t] = b[t] - w[t];
    }
}

} // namespace osm::detail
