#include "sublap/newton.hpp"

#include <cmath>

#include <Eigen/LU>

namespace sublap {

GridFunction newton_oracle(const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                           const BoundaryData& f, double q, const GridFunction& u_init) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0,1)");
    const std::size_t n = G.size();
    const Eigen::MatrixXd& gd = G.dense();

    Eigen::VectorXd m(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) m[static_cast<Eigen::Index>(j)] = mu.mass(j);

    GridFunction gnu = G.potential(nu);
    GridFunction hf = G.harmonic_extension(f);
    Eigen::VectorXd lin(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        lin[static_cast<Eigen::Index>(j)] = gnu.interior[j] + hf.interior[j];

    Eigen::VectorXd u(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        u[static_cast<Eigen::Index>(j)] = u_init.interior[j];
        if (m[static_cast<Eigen::Index>(j)] > 0 && !(u_init.interior[j] > 0))
            throw std::invalid_argument("newton_oracle requires u_init > 0 on the support of mu");
    }

    auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd w(static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < w.size(); ++j)
            w[j] = m[j] > 0 ? std::pow(v[j], q) * m[j] : 0.0;
        return v - gd * w - lin;
    };

    Eigen::VectorXd F = residual(u);
    double fnorm = F.lpNorm<Eigen::Infinity>();
    const int max_newton = 200;
    for (int it = 0; it < max_newton; ++it) {
        if (fnorm <= 1e-12 * std::max(1.0, u.lpNorm<Eigen::Infinity>())) {
            GridFunction out = GridFunction::zeros(G.domain());
            for (std::size_t j = 0; j < n; ++j) out.interior[j] = u[static_cast<Eigen::Index>(j)];
            out.boundary = f.values;
            return out;
        }
        Eigen::VectorXd dweight(static_cast<Eigen::Index>(n));
        for (Eigen::Index j = 0; j < dweight.size(); ++j)
            dweight[j] = m[j] > 0 ? q * std::pow(u[j], q - 1.0) * m[j] : 0.0;
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n)) -
                            gd * dweight.asDiagonal();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        Eigen::VectorXd s = lu.solve(-F);
        if (!s.allFinite() || (J * s + F).lpNorm<Eigen::Infinity>() > 1e-8 * std::max(1.0, fnorm))
            throw numerical_error("newton_oracle: Jacobian is singular or badly conditioned");

        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1e-12) {
            Eigen::VectorXd trial = u + lambda * s;
            bool positive = true;
            for (Eigen::Index j = 0; j < trial.size(); ++j)
                if (m[j] > 0 && !(trial[j] > 0)) { positive = false; break; }
            if (positive) {
                Eigen::VectorXd Ft = residual(trial);
                const double fnt = Ft.lpNorm<Eigen::Infinity>();
                if (fnt <= (1.0 - 0.25 * lambda) * fnorm) {
                    u = std::move(trial);
                    F = std::move(Ft);
                    fnorm = fnt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) throw numerical_error("newton_oracle: line search failed");
    }
    throw numerical_error("newton_oracle: did not reach the residual target");
}

}  // namespace sublap
