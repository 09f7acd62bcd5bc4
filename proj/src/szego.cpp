#include "opuc/szego.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opuc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double inv_rho(cd alpha) {
    const double a2 = cnorm2(alpha);
    if (!(a2 < 1.0)) throw std::invalid_argument("coefficient modulus must be < 1");
    return 1.0 / std::sqrt(1.0 - a2);
}

}  // namespace

double reduce_angle(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

UnitCirclePoint::UnitCirclePoint(double angle) : eta(reduce_angle(angle)) {}

Mat2 one_step_matrix(cd alpha, UnitCirclePoint z) {
    const double ir = inv_rho(alpha);
    const cd zv = z.value();
    return Mat2{zv * ir, -std::conj(alpha) * ir, -cmul(alpha, zv) * ir, cd{ir, 0.0}};
}

PolynomialPairState evolve_pair(const CoefficientSequence& seq, UnitCirclePoint z, std::int64_t n,
                                PolynomialKind kind) {
    if (n < 0) throw std::invalid_argument("step count must be nonnegative");
    // Second kind evolves (psi, -psi*) from (1, -1) with the same factors.
    cd p{1.0, 0.0};
    cd q = kind == PolynomialKind::Second ? cd{-1.0, 0.0} : cd{1.0, 0.0};
    const cd zv = z.value();
    for (std::int64_t j = 0; j < n; ++j) {
        const cd alpha = seq.at(j);
        const double ir = inv_rho(alpha);
        const cd p1 = (cmul(zv, p) - cmul(std::conj(alpha), q)) * ir;
        const cd q1 = (q - cmul(cmul(alpha, zv), p)) * ir;
        p = p1;
        q = q1;
    }
    PolynomialPairState state;
    state.kind = kind;
    state.value = p;
    state.star_value = kind == PolynomialKind::Second ? -q : q;
    state.n = n;
    return state;
}

Mat2 transfer_matrix(const CoefficientSequence& seq, UnitCirclePoint z, std::int64_t n) {
    const auto first = evolve_pair(seq, z, n, PolynomialKind::First);
    const auto second = evolve_pair(seq, z, n, PolynomialKind::Second);
    return Mat2{0.5 * (first.value + second.value), 0.5 * (first.value - second.value),
                0.5 * (first.star_value - second.star_value),
                0.5 * (first.star_value + second.star_value)};
}

ScaledPairEvolution::ScaledPairEvolution(UnitCirclePoint z, PolynomialKind kind, bool monic)
    : z_(z.value()), kind_(kind), monic_(monic) {
    if (kind == PolynomialKind::Second) q_ = cd{-1.0, 0.0};
}

void ScaledPairEvolution::step(cd alpha) {
    const double ir_check = inv_rho(alpha);  // validates |alpha| < 1
    const double ir = monic_ ? 1.0 : ir_check;
    const cd p1 = (cmul(z_, p_) - cmul(std::conj(alpha), q_)) * ir;
    const cd q1 = (q_ - cmul(cmul(alpha, z_), p_)) * ir;
    const double s2 = cnorm2(p1) + cnorm2(q1);
    const double inv_s = 1.0 / std::sqrt(s2);
    p_ = p1 * inv_s;
    q_ = q1 * inv_s;
    log_scale_ += 0.5 * std::log(s2);
    ++n_;
}

TransferEvolution::TransferEvolution(UnitCirclePoint z) : z_(z.value()) {
    // Store I / sqrt(2) so the Frobenius norm is 1 from the start.
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    m_ = Mat2::identity().scaled(inv_sqrt2);
    log_scale_ = 0.5 * std::log(2.0);
}

double TransferEvolution::log_norm() const {
    // Unit Frobenius norm: sigma_max^2 = (1 + (sigma_1^2 - sigma_2^2)) / 2.
    return log_scale_ + 0.5 * std::log(0.5 * (1.0 + m_.singular_gap()));
}

void TransferEvolution::step(cd alpha) {
    const double ir = inv_rho(alpha);
    const cd az = z_ * ir;
    const cd ab = -std::conj(alpha) * ir;
    const cd ac = -cmul(alpha, z_) * ir;

    const cd na = cmul(az, m_.a) + cmul(ab, m_.c);
    const cd nb = cmul(az, m_.b) + cmul(ab, m_.d);
    const cd nc = cmul(ac, m_.a) + m_.c * ir;
    const cd nd = cmul(ac, m_.b) + m_.d * ir;

    const double f2 = cnorm2(na) + cnorm2(nb) + cnorm2(nc) + cnorm2(nd);
    const double inv_f = 1.0 / std::sqrt(f2);
    m_ = Mat2{na * inv_f, nb * inv_f, nc * inv_f, nd * inv_f};
    log_scale_ += 0.5 * std::log(f2);

    // Entrywise one-step determinant, accumulated multiplicatively; |det A| = 1
    // in exact arithmetic, so the product never leaves O(1).
    const cd det_step = cmul(az, cd{ir, 0.0}) - cmul(ab, ac);
    det_acc_ = cmul(det_acc_, det_step);
    ++n_;

    // log_scale is an upper bound for log_norm: only do the exact computation
    // when the bound beats the running sup.  Sub-roundoff improvements count
    // as ties and keep the first index.
    if (log_scale_ > sup_log_ + 1e-12) {
        const double ln = log_norm();
        if (ln > sup_log_ + 1e-12) {
            sup_log_ = ln;
            argmax_ = n_;
        }
    }
}

SupNormResult sup_norm_up_to(const CoefficientSequence& seq, UnitCirclePoint z, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    TransferEvolution evo(z);
    for (std::int64_t j = 0; j < N; ++j) evo.step(seq.at(j));
    SupNormResult result;
    result.sup_log_norm = evo.sup_log_norm();
    result.sup_norm = std::exp(result.sup_log_norm);  // +inf past double range
    result.argmax_n = evo.argmax();
    return result;
}

}  // namespace opuc
