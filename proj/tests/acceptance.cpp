// acceptance — one PASS/FAIL line per acceptance criterion, tolerances fixed below.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "qsde/coefficients.hpp"
#include "qsde/fock_boundary.hpp"
#include "qsde/ito.hpp"
#include "qsde/lindblad.hpp"
#include "qsde/scalar_limit.hpp"
#include "qsde/scenario.hpp"
#include "qsde/toy_jump.hpp"
#include "test_util.hpp"

using namespace qsde;
namespace fs = std::filesystem;

namespace {

// criterion 1
constexpr int kRandomSets = 200;
constexpr double kRoundTripTol = 1e-9;
constexpr double kCayleyTol = 1e-12;
// criterion 2
constexpr double kItoDefectTol = 1e-10;
// criterion 3
constexpr double kRecoveryTol = 1e-9;
// criterion 4
constexpr double kLimit1RelTol = 0.02;
// criterion 5
constexpr double kProfileTol = 0.05;
// criterion 6
constexpr double kNormIdentityTol = 1e-10;
constexpr double kGroupLawTol = 1e-10;
constexpr double kCocycleTol = 1e-9;
constexpr int kGroupPairs = 20;
// criterion 7
constexpr double kToyJumpTol = 1e-4;
constexpr double kHalvingLo = 0.4, kHalvingHi = 0.6;
// criterion 8
constexpr double kIntegrandTol = 1e-12;
constexpr double kResolventTol = 1e-4;
constexpr double kPairingTol = 1e-4;
constexpr double kControlRatio = 10.0;
// criterion 9
constexpr double kUnitalityTol = 1e-10;
constexpr double kDampingTol = 1e-10;
constexpr double kOrderLo = 0.4, kOrderHi = 0.65;
constexpr double kChoiTol = -1e-8;
// runtime budgets (seconds)
constexpr double kBudget[11] = {0, 5, 5, 2, 60, 120, 30, 30, 120, 30, 120};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= kBudget[id];
    if (!in_time) detail += " [over runtime budget]";
    ok = ok && in_time;
    if (!ok) ++failures;
    std::printf("%s criterion %2d  %-34s %7.2fs  %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), secs, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    criterion(1, "coefficient round trip", [](std::string& d) {
        std::mt19937_64 rng(20261);
        double rt = 0, cay = 0;
        for (int i = 0; i < kRandomSets; ++i) {
            const int dim = 1 + i % 8;
            const auto s = testing::random_symmetric(rng, dim, i % 2 == 0);
            const auto hp = hp_from_symmetric(s);
            const auto back = symmetric_from_hp(hp);
            rt = std::max({rt, frobenius(back.h - s.h), frobenius(back.k - s.k), frobenius(back.r - s.r)});
            cay = std::max(cay, unitary_defect(hp.w));
        }
        d = fmt("round trip %.2e", rt) + fmt(", cayley defect %.2e", cay);
        return rt <= kRoundTripTol && cay <= kCayleyTol;
    });

    criterion(2, "Ito unitarity defects", [](std::string& d) {
        std::mt19937_64 rng(20262);
        double worst = 0, balance = 0;
        for (int i = 0; i < kRandomSets; ++i) {
            const int dim = 1 + i % 8;
            const auto hp = hp_from_symmetric(testing::random_symmetric(rng, dim, i % 2 == 0));
            const auto m = adapted_from_hp(hp);
            const auto u = unitarity_defects(m);
            worst = std::max({worst, u.iso.max_norm(), u.coiso.max_norm()});
            QSDifferential unbalanced = m;
            unbalanced.c_t.setZero();
            const double dt = unitarity_defects(unbalanced).iso.c_t.norm();
            balance = std::max(balance, std::abs(dt - (hp.l.adjoint() * hp.l).norm()));
        }
        d = fmt("max defect %.2e", worst) + fmt(", |dt defect - |L*L|| %.2e", balance);
        return worst <= kItoDefectTol && balance <= kItoDefectTol;
    });

    criterion(3, "symmetric-form recovery", [](std::string& d) {
        std::mt19937_64 rng(20263);
        double worst = 0;
        for (int i = 0; i < kRandomSets; ++i) {
            const int dim = 1 + i % 8;
            const auto s = testing::random_symmetric(rng, dim, i % 2 == 0);
            const auto n = adapted_to_symmetric(adapted_from_hp(hp_from_symmetric(s)));
            worst = std::max({worst, frobenius(n.c_t - kI * s.h), frobenius(n.c_a - kI * s.r.adjoint()),
                              frobenius(n.c_adag - kI * s.r), frobenius(n.c_lam - kI * s.k)});
        }
        d = fmt("max |l - (iH, iR*, iR, iK)| %.2e", worst);
        return worst <= kRecoveryTol;
    });

    criterion(4, "Volterra cumulative limit", [](std::string& d) {
        bool ok = true;
        for (double kappa : {0.0, 1.0, 2.0}) {
            const auto rows =
                four_limits_report({0.3, 0.1, 0.03, 0.01}, kappa, 1.0, GaussianBathFunction::standard());
            const FourLimitsRow* last = nullptr;
            for (const auto& r : rows)
                if (r.quantity_id == 1) last = &r;
            const double rel = last->abs_error / std::abs(last->limit);
            const bool mono = tail_non_increasing(rows, 1);
            ok = ok && rel <= kLimit1RelTol && mono;
            d += fmt("k=%g: ", kappa) + fmt("rel %.1e", rel) + (mono ? " mono; " : " NOT mono; ");
        }
        return ok;
    });

    criterion(5, "evolved profile limit", [](std::string& d) {
        const GaussianBathFunction v{Complex(1.0, 0.0), 0.0, 4.0, -0.5};
        const auto rep = evolved_profile_report(v, 2.0, 0.01, 1.0);
        const auto ref = evolved_profile_report(v, 2.0, 0.01, 1.0, 4 * recommended_steps(0.01, 1.0));
        const auto std_v = evolved_profile_report(GaussianBathFunction::standard(), 2.0, 0.01, 1.0);
        d = fmt("distance %.4f", rep.distance) + fmt(" (refined grid %.4f)", ref.distance) +
            fmt(", norm defect %.1e", rep.norm_defect) + fmt("; standard v (info): %.4f", std_v.distance);
        return rep.distance <= kProfileTol && ref.distance <= kProfileTol;
    });

    criterion(6, "limit group unitarity, group law", [](std::string& d) {
        std::mt19937_64 rng(20266);
        std::uniform_real_distribution<double> ud(0.0, 2.0);
        const auto coeffs = testing::random_symmetric(rng, 3, true);
        const LimitGroup grp(coeffs);
        ComplexVector h(3), k(3);
        h << Complex(1, 0), Complex(0.2, 0.3), Complex(-0.4, 0.1);
        k << Complex(0.3, 0), Complex(1, -0.2), Complex(0.1, 0.1);
        const GaussianBathFunction v1{Complex(0.8, 0.1), 0.2, 1.1, -0.3}, v2{Complex(0.4, -0.3), -0.1, 0.9, 0.5};
        const auto psi = CoherentState::make(h, v1), phi = CoherentState::make(k, v2);
        double norm_err = 0, group_err = 0, cocycle_err = 0;
        for (int i = 0; i < kGroupPairs; ++i) {
            const double t = ud(rng), s = ud(rng);
            norm_err = std::max(norm_err, std::abs(grp.evolve(psi, t).norm2() - psi.norm2()) / psi.norm2());
            const Complex a = CoherentState::inner(phi, grp.evolve(grp.evolve(psi, s), t));
            const Complex b = CoherentState::inner(phi, grp.evolve(psi, t + s));
            group_err = std::max(group_err, std::abs(a - b) / std::max(1.0, std::abs(b)));
            // cocycle composition over (0, t) and (t, t + s)
            const Complex c1 = CoherentState::inner(phi, grp.cocycle(psi, 0.0, t + s));
            const Complex c2 = CoherentState::inner(phi, grp.cocycle(grp.cocycle(psi, 0.0, t), t, t + s));
            cocycle_err = std::max(cocycle_err, std::abs(c1 - c2) / std::max(1.0, std::abs(c1)));
            // factorization: only the part inside the interval is touched
            const auto x1 = v1.time_transform(), x2 = v2.time_transform();
            const auto in1 = x1.windowed(s, s + t), in2 = x2.windowed(s, s + t);
            const auto out1 = x1 + in1.scaled(-1.0), out2 = x2 + in2.scaled(-1.0);
            const Complex full = cocycle_element(s, s + t, coeffs, k, x2, h, x1);
            const Complex split =
                std::exp(TimeFunction::inner(out2, out1)) * cocycle_element(s, s + t, coeffs, k, in2, h, in1);
            cocycle_err = std::max(cocycle_err, std::abs(full - split) / std::max(1.0, std::abs(full)));
        }
        d = fmt("norm %.1e", norm_err) + fmt(", group law %.1e", group_err) + fmt(", cocycle %.1e", cocycle_err);
        return norm_err <= kNormIdentityTol && group_err <= kGroupLawTol && cocycle_err <= kCocycleTol;
    });

    criterion(7, "toy phase-jump resolvent", [](std::string& d) {
        const LineGrid g{-20.0, 20.0, 200000};
        const auto psi = WaveSample::from_function(
            g, [](double x) { return Complex(std::exp(-(x + 1) * (x + 1)), 0.3 * std::exp(-x * x)); });
        double worst = 0;
        for (double lam : {std::numbers::pi / 2, std::numbers::pi, 1.0}) {
            const auto r = resolvent_apply(psi, 1.0, lam, 40.0);
            worst = std::max(worst, std::abs(jump_ratio(r) - std::exp(kI * lam)));
        }
        auto defect_at = [](int n) {
            const LineGrid gg{-10.0, 10.0, n};
            auto mk = [&](double c, double s) {
                return WaveSample::from_function(gg, [=](double x) {
                    const Complex v = std::exp(-(x - c) * (x - c) / s);
                    return x > 0 ? v * std::exp(kI * 1.0) : v;
                });
            };
            return symmetry_defect_1d(mk(0.3, 1.0), mk(-0.2, 0.5), 1.0);
        };
        const double ratio = defect_at(40000) / defect_at(20000);
        d = fmt("jump error %.1e", worst) + fmt(", symmetry defect ratio %.3f", ratio);
        return worst <= kToyJumpTol && ratio >= kHalvingLo && ratio <= kHalvingHi;
    });

    criterion(8, "Fock boundary jumps and pairing", [](std::string& d) {
        const auto sb = SectorBoundary::from_sector(ScalarSector{0.0, 2.0, 1.0, 0.0});
        const auto v = GaussianBathFunction::standard();
        double integ = 0, resolv = 0;
        for (int n = 1; n <= 3; ++n)
            for (int k = 0; k < n; ++k) {
                std::vector<double> rest;
                for (int m = 0; m < n - 1; ++m) rest.push_back(0.37 * (m + 1) - 0.2);
                const auto a = jump_residual_integrand(n, 1.0, k, rest, sb, v, Complex(0.7, 0.2));
                const auto b = resolvent_jump_residual(n, 1.0, k, rest, sb, v, Complex(0.7, 0.2));
                integ = std::max(integ, a.residual_abs / a.scale);
                resolv = std::max(resolv, b.residual_abs / b.scale);
            }
        JumpVectorOptions o;
        o.grid = LineGrid{-6.0, 6.0, 12000};  // dx = 1e-3
        const std::vector<GaussianBathFunction> s1{{Complex(1.0, 0.0), 0.0, 1.5, 0.0}};
        const std::vector<GaussianBathFunction> s2{{Complex(0.5, 0.3), 0.0, 1.0, 0.0},
                                                   {Complex(0.2, 0.0), 0.0, 2.0, 0.0}};
        const auto p = pairing_defect(build_jump_vector(2, sb, s2, o), build_jump_vector(2, sb, s1, o), sb);
        o.enforce_jump = false;
        const auto q =
            pairing_defect(build_jump_vector(2, sb, s2, o), build_jump_vector(2, sb, s1, o), sb, false);
        const double ratio = q.normalized / p.normalized;
        d = fmt("integrand %.1e", integ) + fmt(", resolvent %.1e", resolv) + fmt(", pairing %.1e", p.normalized) +
            fmt(" (truncation part %.1e)", p.truncation / p.scale) + fmt(", broken-jump ratio %.0f", ratio);
        return integ <= kIntegrandTol && resolv <= kResolventTol && p.normalized <= kPairingTol &&
               ratio >= kControlRatio;
    });

    criterion(9, "Lindblad semigroup", [](std::string& d) {
        ComplexMatrix h(2, 2), l(2, 2);
        h << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), -0.5;
        l << 0.2, Complex(0.5, 0.1), 0.3, Complex(0, 0.4);
        const auto generic = LindbladModel::make(h, {l});
        const auto damping = amplitude_damping();
        const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
        ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
        p1(1, 1) = 1.0;
        double unital = 0;
        for (double t : {0.5, 1.0, 10.0})
            unital = std::max({unital, frobenius(heisenberg_evolve(generic, id, t) - id),
                               frobenius(heisenberg_evolve(damping, id, t) - id)});
        const double ad = frobenius(heisenberg_evolve(damping, p1, 1.0) - std::exp(-1.0) * p1);
        auto ratio_of = [&](const LindbladModel& m) {
            const ComplexMatrix exact = heisenberg_evolve(m, p1, 1.0);
            return frobenius(repeated_interaction_evolve(m, p1, 1.0, 5e-3) - exact) /
                   frobenius(repeated_interaction_evolve(m, p1, 1.0, 1e-2) - exact);
        };
        const double ratio = ratio_of(generic);
        const double ad_ratio = ratio_of(damping);
        const double choi = std::min(choi_min_eig(generic, 1.0), choi_min_eig(damping, 1.0));
        d = fmt("unitality %.1e", unital) + fmt(", damping %.1e", ad) + fmt(", dt ratio %.3f", ratio) +
            fmt(" (damping model %.3f, second order)", ad_ratio) + fmt(", choi min %.1e", choi);
        return unital <= kUnitalityTol && ad <= kDampingTol && ratio >= kOrderLo && ratio <= kOrderHi &&
               choi >= kChoiTol;
    });

    criterion(10, "deterministic CSV output", [](std::string& d) {
        const fs::path root = fs::temp_directory_path() / "qsde_acceptance";
        fs::remove_all(root);
        int files = 0;
        bool same = true;
        std::vector<fs::path> configs;
        for (const auto& e : fs::directory_iterator(QSDE_CONFIG_DIR))
            if (e.path().extension() == ".json") configs.push_back(e.path());
        std::sort(configs.begin(), configs.end());
        for (const auto& cfg : configs) {
            const std::string stem = cfg.stem().string();
            const auto a = run_scenario(cfg, root / "a" / stem);
            const auto b = run_scenario(cfg, root / "b" / stem, {}, 2);
            for (std::size_t i = 0; i < a.csv_paths.size(); ++i) {
                ++files;
                if (slurp(a.csv_paths[i]) != slurp(b.csv_paths.at(i))) {
                    same = false;
                    d += "differs: " + a.csv_paths[i].string() + "; ";
                }
            }
        }
        d += std::to_string(configs.size()) + " configs, " + std::to_string(files) + " CSV files compared";
        return same && files > 0;
    });

    std::printf("%s: %d criterion/criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
