#include "cofkit/habit.hpp"

#include <algorithm>

#include "cofkit/error.hpp"

namespace cofkit {

Mat3 laminate_gradient(const Mat3& u, const TwinSolution& twin, double mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw Error(ErrorCode::FractionOutOfRange, "volume fraction must lie in [0,1]");
    return u + mu * outer(twin.b, twin.m);
}

double middle_eigenvalue_deviation(const Mat3& f, const Tolerances& tol) {
    if (!(det(f) > 0.0)) throw Error(ErrorCode::SingularGradient, "det F must be positive");
    const SymEig3 e = eig_sym3(transpose(f) * f, tol);
    return std::abs(std::sqrt(e.values[1]) - 1.0);
}

HabitResult habit_solutions(const Mat3& f, const Tolerances& tol) {
    if (!(det(f) > 0.0)) throw Error(ErrorCode::SingularGradient, "det F must be positive");
    const Mat3 c = transpose(f) * f;
    const SymEig3 eig = eig_sym3(c, tol);
    HabitResult out;
    out.sigma2_deviation = std::abs(std::sqrt(eig.values[1]) - 1.0);
    if (out.sigma2_deviation > tol.habit_sigma2)
        throw Error(ErrorCode::NoSolution, "middle singular value deviates from 1 beyond tolerance");

    double l1 = std::min(eig.values[0], 1.0);
    double l3 = std::max(eig.values[2], 1.0);
    const Vec3& e1 = eig.vectors[0];
    const Vec3& e2 = eig.vectors[1];
    const Vec3& e3 = eig.vectors[2];

    const double sig_tol = tol.habit_sigma2;
    const bool low_one = std::abs(std::sqrt(l1) - 1.0) <= sig_tol;
    const bool high_one = std::abs(std::sqrt(l3) - 1.0) <= sig_tol;

    if (low_one && high_one) {
        out.trivial = true;
        HabitSolution s;
        s.rotation = transpose(polar_rotation(f, tol));
        s.n = {0, 0, 1};
        out.solutions.push_back(s);
        out.residual = frobenius(s.rotation * f - Mat3::identity());
        return out;
    }
    if (low_one) l1 = 1.0;
    if (high_one) l3 = 1.0;
    out.degenerate = low_one || high_one;

    // F̃ has the projected spectrum (l1, 1, l3) on the same eigenvectors
    const Mat3 c_inv_half = (1.0 / std::sqrt(eig.values[0])) * outer(e1, e1) +
                            (1.0 / std::sqrt(eig.values[1])) * outer(e2, e2) +
                            (1.0 / std::sqrt(eig.values[2])) * outer(e3, e3);
    const Mat3 c_half = std::sqrt(l1) * outer(e1, e1) + outer(e2, e2) + std::sqrt(l3) * outer(e3, e3);
    const Mat3 ft = f * c_inv_half * c_half;
    const Mat3 ft_inv = inverse(ft);

    const double span = l3 - l1;
    for (double kappa : {1.0, -1.0}) {
        Vec3 a = std::sqrt(l3 * (1.0 - l1) / span) * e1 + kappa * std::sqrt(l1 * (l3 - 1.0) / span) * e3;
        Vec3 n = ((std::sqrt(l3) - std::sqrt(l1)) / std::sqrt(span)) *
                 (-std::sqrt(1.0 - l1) * e1 + kappa * std::sqrt(l3 - 1.0) * e3);
        const double rho = norm(n);
        n = n / rho;
        a = rho * a;
        if (first_nonzero_negative(n)) {
            n = -n;
            a = -a;
        }

        HabitSolution s;
        s.a = a;
        s.n = n;
        s.rotation = (Mat3::identity() + outer(a, n)) * ft_inv;
        if (frobenius(transpose(s.rotation) * s.rotation - Mat3::identity()) > tol.polar_drift)
            s.rotation = polar_rotation(s.rotation, tol);

        bool dup = false;
        for (const auto& prev : out.solutions)
            if (frobenius(outer(prev.a, prev.n) - outer(a, n)) <= tol.merge) dup = true;
        if (dup) continue;
        out.residual = std::max(out.residual, frobenius(s.rotation * ft - Mat3::identity() - outer(a, n)));
        out.solutions.push_back(s);
    }
    return out;
}

HabitResult laminate_habit_solutions(const Mat3& u, const TwinSolution& twin, double mu, const Tolerances& tol) {
    HabitResult r = habit_solutions(laminate_gradient(u, twin, mu), tol);
    for (auto& s : r.solutions) s.mu = mu;
    return r;
}

}  // namespace cofkit
