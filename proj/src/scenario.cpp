#include "qsde/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "qsde/coefficients.hpp"
#include "qsde/csv.hpp"
#include "qsde/fock_boundary.hpp"
#include "qsde/ito.hpp"
#include "qsde/lindblad.hpp"

namespace qsde {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kScenarioIds{"transform", "ito-check", "limits",
                                            "toy-jump",  "boundary",  "lindblad"};

// ---------------------------------------------------------------------------
// config parsing

double number_at(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": expected a number");
    return j.get<double>();
}

Complex parse_complex(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ConfigError(field + ": expected [re, im]");
    return {number_at(j[0], field), number_at(j[1], field)};
}

// Accepts nested rows [[[re, im], ...], ...] or a flat row-major list of dim^2 pairs.
ComplexMatrix parse_matrix(const json& j, int dim, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field + ": expected an array");
    ComplexMatrix m(dim, dim);
    const bool nested = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
    if (nested) {
        if (static_cast<int>(j.size()) != dim)
            throw ConfigError(field + ": has " + std::to_string(j.size()) + " rows, dim is " + std::to_string(dim));
        for (int r = 0; r < dim; ++r) {
            if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim)
                throw ConfigError(field + ": row " + std::to_string(r) + " is not of length " + std::to_string(dim));
            for (int c = 0; c < dim; ++c) m(r, c) = parse_complex(j[r][c], field);
        }
    } else {
        if (static_cast<int>(j.size()) != dim * dim)
            throw ConfigError(field + ": expected " + std::to_string(dim * dim) + " entries for dim " +
                              std::to_string(dim) + ", got " + std::to_string(j.size()));
        for (int i = 0; i < dim * dim; ++i) m(i / dim, i % dim) = parse_complex(j[i], field);
    }
    return m;
}

GaussianBathFunction parse_bath(const json& j, const std::string& field) {
    GaussianBathFunction v = GaussianBathFunction::standard();
    if (j.is_null()) return v;
    if (!j.is_object()) throw ConfigError(field + ": expected an object");
    if (j.contains("amplitude")) v.amplitude = parse_complex(j["amplitude"], field + ".amplitude");
    if (j.contains("center")) v.center = number_at(j["center"], field + ".center");
    if (j.contains("width")) v.width = number_at(j["width"], field + ".width");
    if (j.contains("time_shift")) v.time_shift = number_at(j["time_shift"], field + ".time_shift");
    try {
        v.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(field + ": " + e.what());
    }
    return v;
}

template <class T>
T param(const ScenarioConfig& cfg, const std::string& key, T fallback) {
    if (!cfg.params.contains(key)) return fallback;
    try {
        return cfg.params[key].get<T>();
    } catch (const json::exception&) {
        throw ConfigError("params." + key + ": wrong type");
    }
}

std::vector<double> param_list(const ScenarioConfig& cfg, const std::string& key, std::vector<double> fallback) {
    if (!cfg.params.contains(key)) return fallback;
    const json& j = cfg.params[key];
    if (!j.is_array() || j.empty()) throw ConfigError("params." + key + ": expected a non-empty list");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number_at(x, "params." + key));
    return out;
}

// ---------------------------------------------------------------------------
// run helpers

// Runs fn(i) for i in [0, n) on up to `jobs` threads; results stay indexed by i.
template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
    jobs = std::clamp(jobs, 1, std::max(n, 1));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&, j] {
            try {
                for (int i = j; i < n; i += jobs) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(j)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

void check_le(RunReport& rep, const std::string& name, double value, double threshold) {
    rep.checks.push_back({name, std::isfinite(value) && value <= threshold, value, threshold});
}

void check_ge(RunReport& rep, const std::string& name, double value, double threshold) {
    rep.checks.push_back({name, std::isfinite(value) && value >= threshold, value, threshold});
}

void emit(RunReport& rep, const fs::path& out_dir, const std::string& file, const CsvTable& table) {
    const fs::path p = out_dir / file;
    table.write(p);
    rep.csv_paths.push_back(p);
    spdlog::info("wrote {} ({} rows)", p.string(), table.rows());
}

std::string kappa_tag(double kappa) { return "kappa=" + format_double(kappa); }

SymmetricCoefficients symmetric_from_config(const ScenarioConfig& cfg) {
    SymmetricCoefficients s{cfg.matrix_or_zero("H"), cfg.matrix_or_zero("K"), cfg.matrix_or_zero("R")};
    try {
        s.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("matrices: ") + e.what());
    }
    return s;
}

SymmetricCoefficients random_symmetric(std::mt19937_64& rng, int d, bool commuting) {
    std::normal_distribution<double> nd;
    auto gauss = [&](int n) {
        ComplexMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
        return a;
    };
    if (!commuting) {
        const ComplexMatrix a = gauss(d), b = gauss(d);
        return {hermitian_part(a), hermitian_part(b), gauss(d)};
    }
    const ComplexMatrix u = polar_unitary(gauss(d));
    ComplexVector h(d), k(d), r(d);
    for (int i = 0; i < d; ++i) {
        h(i) = nd(rng);
        k(i) = nd(rng);
        r(i) = Complex(nd(rng), nd(rng));
    }
    return {u * h.asDiagonal() * u.adjoint(), u * k.asDiagonal() * u.adjoint(), u * r.asDiagonal() * u.adjoint()};
}

double round_trip_error(const SymmetricCoefficients& s) {
    const SymmetricCoefficients back = symmetric_from_hp(hp_from_symmetric(s));
    return std::max({frobenius(back.h - s.h), frobenius(back.k - s.k), frobenius(back.r - s.r)});
}

// ---------------------------------------------------------------------------
// scenarios

void run_transform(const ScenarioConfig& cfg, const fs::path& out, RunReport& rep) {
    const SymmetricCoefficients s = symmetric_from_config(cfg);
    const HPCoefficients hp = hp_from_symmetric(s);

    CsvTable t({"sample", "matrix", "row", "col", "re", "im"});
    const std::vector<std::pair<std::string, const ComplexMatrix*>> mats{
        {"W", &hp.w}, {"L", &hp.l}, {"G", &hp.g}, {"L1", &hp.l1}, {"Hs", &hp.hs}};
    for (const auto& [name, m] : mats)
        for (Eigen::Index r = 0; r < m->rows(); ++r)
            for (Eigen::Index c = 0; c < m->cols(); ++c)
                t.add_row({"config", name, format_int(r), format_int(c), format_double((*m)(r, c).real()),
                           format_double((*m)(r, c).imag())});

    double rt = round_trip_error(s);
    double cay = unitary_defect(hp.w);
    const auto u = hp_unitarity_report(hp);
    double hp_defect = std::max({u.d_w, u.d_iso, u.d_l1, u.d_hs});

    const int n_random = param(cfg, "random_samples", 0);
    const int max_dim = param(cfg, "random_max_dim", 8);
    if (n_random > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<int> dim_dist(1, max_dim);
        for (int i = 0; i < n_random; ++i) {
            const int d = dim_dist(rng);
            const SymmetricCoefficients rs = random_symmetric(rng, d, i % 2 == 0);
            const HPCoefficients rh = hp_from_symmetric(rs);
            const double e = round_trip_error(rs);
            const double c = unitary_defect(rh.w);
            rt = std::max(rt, e);
            cay = std::max(cay, c);
            t.add_row({format_int(i), "round_trip_error", format_int(d), "0", format_double(e), "0"});
        }
    }
    emit(rep, out, "transform.csv", t);
    check_le(rep, "round_trip", rt, cfg.tol("round_trip", 1e-9));
    check_le(rep, "cayley_unitary", cay, cfg.tol("cayley_unitary", 1e-12));
    check_le(rep, "hp_conditions", hp_defect, cfg.tol("hp_conditions", 1e-10));
}

void run_ito_check(const ScenarioConfig& cfg, const fs::path& out, RunReport& rep) {
    const SymmetricCoefficients s = symmetric_from_config(cfg);
    const HPCoefficients hp = hp_from_symmetric(s);
    const QSDifferential m = adapted_from_hp(hp);
    const UnitarityDefects d = unitarity_defects(m);

    CsvTable t({"coeff_basis", "frobenius_norm"});
    double worst = 0.0;
    for (const auto& [tag, q] : {std::pair{"iso", &d.iso}, std::pair{"coiso", &d.coiso}}) {
        const auto norms = q->norms();
        for (int b = 0; b < 4; ++b) {
            t.add_row({std::string(tag) + "." + std::string(kBasisNames[static_cast<std::size_t>(b)]),
                       format_double(norms[static_cast<std::size_t>(b)])});
            worst = std::max(worst, norms[static_cast<std::size_t>(b)]);
        }
    }

    // Dropping the dt balance leaves exactly L^* L in the dt coefficient.
    QSDifferential unbalanced = m;
    unbalanced.c_t.setZero();
    const double dt_defect = unitarity_defects(unbalanced).iso.c_t.norm();
    const double lstar_l = (hp.l.adjoint() * hp.l).norm();
    t.add_row({"unbalanced.iso.dt", format_double(dt_defect)});

    const QSDifferential n = adapted_to_symmetric(m);
    const double recovery = std::max({frobenius(n.c_t - kI * s.h), frobenius(n.c_a - kI * s.r.adjoint()),
                                      frobenius(n.c_adag - kI * s.r), frobenius(n.c_lam - kI * s.k)});
    emit(rep, out, "ito_defects.csv", t);
    check_le(rep, "unitarity_defects", worst, cfg.tol("unitarity", 1e-10));
    check_le(rep, "unbalanced_dt_defect", std::abs(dt_defect - lstar_l), cfg.tol("unbalanced", 1e-10));
    check_le(rep, "symmetric_recovery", recovery, cfg.tol("recovery", 1e-9));
}

void run_limits(const ScenarioConfig& cfg, const fs::path& out, RunReport& rep, int jobs) {
    std::vector<double> kappas;
    for (const auto& s : cfg.sectors) kappas.push_back(s.kappa);
    if (kappas.empty()) kappas.push_back(0.0);
    const std::vector<double> schedule =
        cfg.alpha_schedule.empty() ? std::vector<double>{0.3, 0.1, 0.03, 0.01} : cfg.alpha_schedule;
    const GaussianBathFunction v = parse_bath(cfg.params.value("v", json()), "params.v");
    RefinementOptions opt;
    opt.tol = cfg.tol("solver", opt.tol);
    if (cfg.n_steps > 0) opt.max_steps = cfg.n_steps;  // cap on the step-doubling refinement

    std::vector<std::vector<FourLimitsRow>> per_kappa(kappas.size());
    parallel_for(static_cast<int>(kappas.size()), jobs, [&](int i) {
        const auto ui = static_cast<std::size_t>(i);
        per_kappa[ui] = four_limits_report(schedule, kappas[ui], cfg.t_max, v, opt);
    });

    CsvTable t({"alpha", "kappa", "quantity_id", "re_value", "im_value", "re_limit", "im_limit", "abs_error"});
    const bool check_profile = param(cfg, "check_profile", false);
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        const auto& rows = per_kappa[i];
        for (const auto& r : rows)
            t.add_row({format_double(r.alpha), format_double(r.kappa), format_int(r.quantity_id),
                       format_double(r.value.real()), format_double(r.value.imag()), format_double(r.limit.real()),
                       format_double(r.limit.imag()), format_double(r.abs_error)});
        const FourLimitsRow* last1 = nullptr;
        const FourLimitsRow* last4 = nullptr;
        for (const auto& r : rows) {
            if (r.quantity_id == 1) last1 = &r;
            if (r.quantity_id == 4) last4 = &r;
        }
        const std::string tag = kappa_tag(kappas[i]);
        check_le(rep, "q1_relative_error." + tag, last1->abs_error / std::abs(last1->limit),
                 cfg.tol("q1_relative", 0.02));
        const int tail = std::min<int>(3, static_cast<int>(schedule.size()));
        for (int q = 1; q <= 3; ++q)
            rep.checks.push_back({"q" + std::to_string(q) + "_tail_non_increasing." + tag,
                                  tail_non_increasing(rows, q, tail), 0.0, 0.0});
        if (check_profile)
            check_le(rep, "profile_distance." + tag, last4->abs_error, cfg.tol("profile_distance", 0.05));
    }
    emit(rep, out, "limits.csv", t);
}

void run_toy_jump(const ScenarioConfig& cfg, const fs::path& out, RunReport& rep) {
    const LineGrid grid = cfg.grid.value_or(LineGrid{-20.0, 20.0, 200000});
    const double mu = param(cfg, "mu", 1.0);
    const auto lambdas = param_list(cfg, "lambdas", {std::numbers::pi / 2, std::numbers::pi, 1.0});
    const auto psi = WaveSample::from_function(
        grid, [](double x) { return Complex(std::exp(-(x + 1) * (x + 1)), 0.3 * std::exp(-x * x)); });

    CsvTable t({"lambda", "alpha_or_limit", "mu", "jump_re", "jump_im", "expected_re", "expected_im", "abs_err"});
    double worst_jump = 0.0, worst_res = 0.0;
    for (double lam : lambdas) {
        const auto r = resolvent_apply(psi, mu, lam, std::max(40.0, 40.0 / mu));
        const Complex j = jump_ratio(r);
        const Complex e = std::exp(kI * lam);
        worst_jump = std::max(worst_jump, std::abs(j - e));
        worst_res = std::max(worst_res, resolvent_residual(r, psi, mu));
        t.add_row({format_double(lam), "limit", format_double(mu), format_double(j.real()), format_double(j.imag()),
                   format_double(e.real()), format_double(e.imag()), format_double(std::abs(j - e))});
        // Pre-limit: phase picked up at x = t/2 by the part of the wave that crossed the potential.
        const double tt = cfg.t_max;
        int node = 0;
        while (node + 1 < grid.n && grid.x(node) < tt / 2) ++node;
        const auto un = static_cast<std::size_t>(node);
        const Complex shifted = limit_evolve(psi, tt, 0.0).values[un];
        for (double a : cfg.alpha_schedule) {
            const Complex jr = prelimit_evolve(psi, tt, lam, a).values[un] / shifted;
            t.add_row({format_double(lam), format_double(a), format_double(mu), format_double(jr.real()),
                       format_double(jr.imag()), format_double(e.real()), format_double(e.imag()),
                       format_double(std::abs(jr - e))});
        }
    }

    // Symmetry defect of a jump-compliant pair under grid refinement.
    const int n0 = param(cfg, "symmetry_n", 20000);
    const double lam = lambdas.front();
    auto defect_at = [&](int n) {
        const LineGrid g{-10.0, 10.0, n};
        auto mk = [&](double c, double s) {
            return WaveSample::from_function(g, [=](double x) {
                const Complex val = std::exp(-(x - c) * (x - c) / s);
                return x > 0 ? val * std::exp(kI * lam) : val;
            });
        };
        return symmetry_defect_1d(mk(0.3, 1.0), mk(-0.2, 0.5), lam);
    };
    const double d1 = defect_at(n0), d2 = defect_at(2 * n0);
    t.add_row({format_double(lam), "symmetry_defect_dx", format_double(20.0 / n0), format_double(d1), "0", "0", "0",
               format_double(d1)});
    t.add_row({format_double(lam), "symmetry_defect_dx/2", format_double(10.0 / n0), format_double(d2), "0", "0",
               "0", format_double(d2)});
    emit(rep, out, "toy_jump.csv", t);
    check_le(rep, "jump_ratio", worst_jump, cfg.tol("jump", 1e-4));
    check_le(rep, "resolvent_residual", worst_res, cfg.tol("resolvent_residual", 1e-6));
    const double ratio = d2 / d1;
    rep.checks.push_back({"symmetry_defect_halves", ratio >= cfg.tol("halving_lo", 0.4) &&
                                                        ratio <= cfg.tol("halving_hi", 0.6),
                          ratio, 0.5});
}

void run_boundary(const ScenarioConfig& cfg, const fs::path& out, RunReport& rep) {
    const ScalarSector sector = cfg.sectors.empty() ? ScalarSector{0.0, 2.0, 1.0, 0.0} : cfg.sectors.front();
    const SectorBoundary sb = SectorBoundary::from_sector(sector);
    const GaussianBathFunction v = parse_bath(cfg.params.value("v", json()), "params.v");
    const double mu = param(cfg, "mu", 1.0);
    const int n_max = param(cfg, "n_max", 2);
    const double dx = param(cfg, "dx", 1e-3);
    const Complex hw{0.7, 0.2};

    CsvTable t({"level", "n", "k", "residual_abs", "scale", "grid_dx"});
    double worst_int = 0.0, worst_res = 0.0;
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k < n; ++k) {
            std::vector<double> rest;
            for (int m = 0; m < n - 1; ++m) rest.push_back(0.37 * (m + 1) - 0.2);
            const auto a = jump_residual_integrand(n, cfg.t_max, k, rest, sb, v, hw);
            const auto b = resolvent_jump_residual(n, mu, k, rest, sb, v, hw);
            worst_int = std::max(worst_int, a.residual_abs / a.scale);
            worst_res = std::max(worst_res, b.residual_abs / b.scale);
            t.add_row({"integrand", format_int(n), format_int(k), format_double(a.residual_abs),
                       format_double(a.scale), "0"});
            t.add_row({"resolvent", format_int(n), format_int(k), format_double(b.residual_abs),
                       format_double(b.scale), "0"});
        }

    JumpVectorOptions o;
    const double span = param(cfg, "half_width", 6.0);
    o.grid = LineGrid{-span, span, static_cast<int>(std::lround(2 * span / dx))};
    o.edge_width = param(cfg, "edge_width", o.edge_width);
    o.gamma = param(cfg, "gamma", o.gamma.real());
    const std::vector<GaussianBathFunction> s1{{Complex(1.0, 0.0), 0.0, 1.5, 0.0}};
    const std::vector<GaussianBathFunction> s2{{Complex(0.5, 0.3), 0.0, 1.0, 0.0}, {Complex(0.2, 0.0), 0.0, 2.0, 0.0}};
    const auto psi = build_jump_vector(n_max, sb, s1, o);
    const auto phi = build_jump_vector(n_max, sb, s2, o);
    const std::string gdx = format_double(o.grid.dx());
    double worst_vec = 0.0;
    for (const auto& r : vector_jump_residuals(psi, sb)) {
        worst_vec = std::max(worst_vec, r.residual_abs / r.scale);
        t.add_row({"vector", format_int(r.n), format_int(r.k), format_double(r.residual_abs), format_double(r.scale),
                   gdx});
    }
    const double trace = trace_consistency(psi);
    const PairingReport p = pairing_defect(phi, psi, sb);
    o.enforce_jump = false;
    const PairingReport q =
        pairing_defect(build_jump_vector(n_max, sb, s2, o), build_jump_vector(n_max, sb, s1, o), sb, false);
    t.add_row({"pairing", format_int(n_max), "-1", format_double(p.defect), format_double(p.scale), gdx});
    t.add_row({"pairing_truncation", format_int(n_max), "-1", format_double(p.truncation), format_double(p.scale), gdx});
    t.add_row({"pairing_broken_jump", format_int(n_max), "-1", format_double(q.defect), format_double(q.scale), gdx});
    emit(rep, out, "boundary.csv", t);

    check_le(rep, "integrand_jump", worst_int, cfg.tol("integrand", 1e-12));
    check_le(rep, "resolvent_jump", worst_res, cfg.tol("resolvent", 1e-4));
    check_le(rep, "vector_jump", worst_vec, cfg.tol("vector_jump", 1e-10));
    check_le(rep, "trace_consistency", trace, cfg.tol("trace", 1e-6));
    check_le(rep, "pairing_normalized", p.normalized, cfg.tol("pairing", 1e-4));
    check_ge(rep, "broken_jump_ratio", q.normalized / p.normalized, cfg.tol("control_ratio", 10.0));
}

void run_lindblad(const ScenarioConfig& cfg, const fs::path& out, RunReport& rep, int jobs) {
    const int d = cfg.dim;
    std::vector<ComplexMatrix> channels;
    for (const auto& [name, m] : cfg.matrices)
        if (name.size() >= 1 && name[0] == 'L') channels.push_back(m);
    const double jump_scale = param(cfg, "jump_scale", 1.0);
    LindbladModel model;
    try {
        model = LindbladModel::make(cfg.matrix_or_zero("H0"), channels, {}, jump_scale);
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("matrices: ") + e.what());
    }
    ComplexMatrix b = ComplexMatrix::Zero(d, d);
    b(d - 1, d - 1) = 1.0;
    if (cfg.matrices.contains("B")) b = cfg.matrices.at("B");
    const auto dts = param_list(cfg, "dts", {1e-2, 5e-3});
    const std::string model_id = param(cfg, "model_id", std::string("model"));
    const double t = cfg.t_max;

    const ComplexMatrix exact = heisenberg_evolve(model, b, t);
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const double unital = frobenius(heisenberg_evolve(model, id, t) - id);
    const double choi = choi_min_eig(model, t);
    const double tp = trace_preservation_defect(model, t);

    std::vector<double> errs(dts.size());
    parallel_for(static_cast<int>(dts.size()), jobs, [&](int i) {
        const auto ui = static_cast<std::size_t>(i);
        errs[ui] = frobenius(repeated_interaction_evolve(model, b, t, dts[ui]) - exact);
    });
    CsvTable tab({"model_id", "t", "dt", "error_frobenius", "unitality_defect", "choi_min_eig"});
    for (std::size_t i = 0; i < dts.size(); ++i)
        tab.add_row({model_id, format_double(t), format_double(dts[i]), format_double(errs[i]), format_double(unital),
                     format_double(choi)});
    emit(rep, out, "lindblad.csv", tab);

    check_le(rep, "unitality", unital, cfg.tol("unitality", 1e-10));
    check_le(rep, "trace_preservation", tp, cfg.tol("trace_preservation", 1e-10));
    check_ge(rep, "choi_min_eig", choi, -cfg.tol("choi", 1e-8));
    if (dts.size() >= 2 && param(cfg, "check_order", true)) {
        const double ratio = errs[1] / errs[0];
        rep.checks.push_back({"first_order_ratio",
                              ratio >= cfg.tol("ratio_lo", 0.4) && ratio <= cfg.tol("ratio_hi", 0.65), ratio,
                              dts[1] / dts[0]});
    }
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void write_report(const RunReport& rep, const fs::path& out_dir) {
    json j;
    j["generated_at"] = timestamp();
    j["scenario"] = rep.scenario;
    j["passed"] = rep.passed();
    j["wall_seconds"] = rep.wall_seconds;
    j["checks"] = json::array();
    for (const auto& c : rep.checks)
        j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}});
    j["csv"] = json::array();
    for (const auto& p : rep.csv_paths) j["csv"].push_back(p.filename().string());
    std::ofstream f(out_dir / "report.json");
    f << j.dump(2) << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ScenarioConfig c;
    if (!j.contains("scenario") || !j["scenario"].is_string()) throw ConfigError("scenario: missing or not a string");
    c.scenario = j["scenario"].get<std::string>();
    if (std::find(kScenarioIds.begin(), kScenarioIds.end(), c.scenario) == kScenarioIds.end())
        throw ConfigError("scenario: unknown id '" + c.scenario + "'");
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1 || j["dim"].get<int>() > 16)
            throw ConfigError("dim: expected an integer in [1, 16]");
        c.dim = j["dim"].get<int>();
    }
    if (j.contains("matrices")) {
        if (!j["matrices"].is_object()) throw ConfigError("matrices: expected an object");
        for (const auto& [name, m] : j["matrices"].items())
            c.matrices[name] = parse_matrix(m, c.dim, "matrices." + name);
    }
    if (j.contains("sectors")) {
        if (!j["sectors"].is_array()) throw ConfigError("sectors: expected a list");
        for (std::size_t i = 0; i < j["sectors"].size(); ++i) {
            const json& s = j["sectors"][i];
            const std::string f = "sectors[" + std::to_string(i) + "]";
            if (!s.is_object()) throw ConfigError(f + ": expected an object");
            ScalarSector sc;
            sc.nu = s.contains("nu") ? number_at(s["nu"], f + ".nu") : 0.0;
            sc.kappa = s.contains("kappa") ? number_at(s["kappa"], f + ".kappa") : 0.0;
            sc.rho = s.contains("rho") ? number_at(s["rho"], f + ".rho") : 0.0;
            sc.phi = s.contains("phi") ? number_at(s["phi"], f + ".phi") : 0.0;
            if (sc.rho < 0) throw ConfigError(f + ".rho: must be >= 0");
            c.sectors.push_back(sc);
        }
    }
    if (j.contains("alpha_schedule")) {
        const json& a = j["alpha_schedule"];
        if (!a.is_array() || a.empty()) throw ConfigError("alpha_schedule: expected a non-empty list");
        for (const auto& x : a) {
            const double v = number_at(x, "alpha_schedule");
            if (!(v > 0)) throw ConfigError("alpha_schedule: entries must be positive");
            c.alpha_schedule.push_back(v);
        }
    }
    if (j.contains("time")) {
        const json& t = j["time"];
        if (!t.is_object()) throw ConfigError("time: expected an object");
        if (t.contains("t_max")) c.t_max = number_at(t["t_max"], "time.t_max");
        if (t.contains("n_steps")) c.n_steps = static_cast<int>(number_at(t["n_steps"], "time.n_steps"));
        if (!(c.t_max > 0)) throw ConfigError("time.t_max: must be positive");
        if (c.n_steps < 0) throw ConfigError("time.n_steps: must be >= 0");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) throw ConfigError("grid: expected an object");
        LineGrid lg;
        lg.x_min = number_at(g.value("x_min", json()), "grid.x_min");
        lg.x_max = number_at(g.value("x_max", json()), "grid.x_max");
        lg.n = static_cast<int>(number_at(g.value("n", json()), "grid.n"));
        try {
            lg.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
        c.grid = lg;
    }
    if (j.contains("tolerances")) {
        if (!j["tolerances"].is_object()) throw ConfigError("tolerances: expected an object");
        for (const auto& [name, v] : j["tolerances"].items()) c.tolerances[name] = number_at(v, "tolerances." + name);
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ConfigError("seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigError("params: expected an object");
        c.params = j["params"];
    }
    return c;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        json& next = (*node)[parts[i]];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigError("override '" + key + "': '" + parts[i] + "' is not an object");
        node = &next;
    }
    (*node)[parts.back()] = value;
}

ScenarioConfig ScenarioConfig::load(const fs::path& path, const std::vector<std::string>& overrides) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return from_json(doc);
}

double ScenarioConfig::tol(const std::string& name, double fallback) const {
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

ComplexMatrix ScenarioConfig::matrix_or_zero(const std::string& name) const {
    const auto it = matrices.find(name);
    return it == matrices.end() ? ComplexMatrix::Zero(dim, dim) : it->second;
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> list{
        {"transform", "symmetric (H, K, R) -> (G, L, W) coefficients and round-trip audit"},
        {"ito-check", "Ito-table unitarity defects and symmetric-form recovery"},
        {"limits", "scaled-Hamiltonian limits along an alpha schedule"},
        {"toy-jump", "phase-jump resolvent of the transport toy model"},
        {"boundary", "boundary-jump residuals and generator pairing on truncated Fock vectors"},
        {"lindblad", "Lindblad semigroup versus the repeated-interaction oracle"},
    };
    return list;
}

RunReport run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir, int jobs) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    RunReport rep;
    rep.scenario = cfg.scenario;
    spdlog::info("running scenario {}", cfg.scenario);
    if (cfg.scenario == "transform") run_transform(cfg, out_dir, rep);
    else if (cfg.scenario == "ito-check") run_ito_check(cfg, out_dir, rep);
    else if (cfg.scenario == "limits") run_limits(cfg, out_dir, rep, jobs);
    else if (cfg.scenario == "toy-jump") run_toy_jump(cfg, out_dir, rep);
    else if (cfg.scenario == "boundary") run_boundary(cfg, out_dir, rep);
    else if (cfg.scenario == "lindblad") run_lindblad(cfg, out_dir, rep, jobs);
    else throw ConfigError("scenario: unknown id '" + cfg.scenario + "'");
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& c : rep.checks)
        spdlog::debug("check {}: {} (value {}, threshold {})", c.name, c.passed ? "pass" : "FAIL", c.value,
                      c.threshold);
    write_report(rep, out_dir);
    return rep;
}

RunReport run_scenario(const fs::path& config_path, const fs::path& out_dir,
                       const std::vector<std::string>& overrides, int jobs) {
    return run_scenario(ScenarioConfig::load(config_path, overrides), out_dir, jobs);
}

}  // namespace qsde
