#include "pinlab/harness.hpp"

#include "pinlab/cache.hpp"
#include "pinlab/coarse_grain.hpp"
#include "pinlab/continuum.hpp"
#include "pinlab/dickman.hpp"
#include "pinlab/disorder.hpp"
#include "pinlab/hit_table.hpp"
#include "pinlab/kernel_table.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/quad.hpp"
#include "pinlab/she.hpp"
#include "pinlab/steplaw.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace pinlab::harness {

namespace fs = std::filesystem;

namespace {

struct Field {
    const char* key;
    const char* type; // "int", "num", "str", "list_num", "list_int", "bool"
    bool required;
    json def;
};

const std::vector<Field>& schema_fields(const std::string& sub) {
    static const std::vector<Field> kCommon = {
        {"out_dir", "str", false, "pinlab_out"},
        {"seed", "int", false, 1234},
        {"workers", "int", false, 1},
    };
    static std::map<std::string, std::vector<Field>> m = [] {
        std::map<std::string, std::vector<Field>> s;
        s["validate-walk"] = {{"law", "str", false, "default"}};
        s["kernels"] = {{"law", "str", false, "default"},
                        {"n_max", "int", true, nullptr},
                        {"with_K", "bool", false, true},
                        {"cache", "str", false, ""},
                        {"csv", "bool", false, true}};
        s["beta"] = {{"law", "str", false, "default"},
                     {"disorder", "str", false, "gaussian"},
                     {"N", "int", true, nullptr},
                     {"vartheta", "num", false, 0.0}};
        s["partition"] = {{"op", "str", true, nullptr}, // chaos|decomposition|free-energy
                          {"law", "str", false, "default"},
                          {"disorder", "str", false, "gaussian"},
                          {"N", "int", true, nullptr},
                          {"vartheta", "num", false, 0.0},
                          {"h", "num", false, 0.0},
                          {"beta", "num", false, -1.0},
                          {"samples", "int", false, 1000},
                          {"phi", "str", false, "gaussian_bump"},
                          {"psi", "str", false, "gaussian_bump"}};
        s["moments"] = {{"law", "str", false, "default"},
                        {"disorder", "str", false, "gaussian"},
                        {"N", "int", true, nullptr},
                        {"vartheta", "num", false, 0.0},
                        {"samples", "int", false, 10000},
                        {"phi", "str", false, "gaussian_bump"},
                        {"psi", "str", false, "gaussian_bump"}};
        s["dickman"] = {{"s_list", "list_num", false, json::array({0.5, 1.0, 2.0})},
                        {"t_max", "num", false, 4.0},
                        {"grid", "int", false, 400}};
        s["gtheta"] = {{"vartheta", "num", false, 0.0},
                       {"t_list", "list_num", false,
                        json::array({1e-6, 1e-4, 1e-2, 0.1, 0.25, 0.5, 0.8, 1.0})},
                       {"renewal_check", "bool", false, true}};
        s["cg"] = {{"op", "str", false, "l2"}, // l2 | moments | converge
                   {"law", "str", false, "default"},
                   {"disorder", "str", false, "gaussian"},
                   {"eps", "list_num", false, json::array({0.125, 0.0625, 0.03125})},
                   {"keps", "int", false, 2},
                   {"n", "int", false, 3200},
                   {"n_list", "list_int", false, json::array({1000, 10000, 100000})},
                   {"vartheta", "num", false, 0.0},
                   {"samples", "int", false, 1000},
                   {"phi", "str", false, "gaussian_bump"},
                   {"psi", "str", false, "gaussian_bump"}};
        s["she"] = {{"delta2", "num", false, 1e-3},
                    {"theta", "num", false, 0.0},
                    {"f", "str", false, "gaussian_bump"},
                    {"dt_factor", "int", false, 8192}, // dt = delta^{-2}/dt_factor
                    {"dx", "num", false, 0.125},
                    {"noises", "int", false, 128},
                    {"grid", "int", false, 4096}};
        s["report"] = {{"dir", "str", true, nullptr}};
        for (auto& [k, v] : s)
            if (k != "report")
                for (const auto& c : kCommon) v.push_back(c);
        return s;
    }();
    auto it = m.find(sub);
    if (it == m.end()) throw std::invalid_argument("unknown subcommand: " + sub);
    return it->second;
}

bool type_ok(const json& v, const std::string& t) {
    if (t == "int") return v.is_number_integer() || (v.is_number() && v.get<double>() == std::floor(v.get<double>()));
    if (t == "num") return v.is_number();
    if (t == "str") return v.is_string();
    if (t == "bool") return v.is_boolean();
    if (t == "list_num") return v.is_array();
    if (t == "list_int") return v.is_array();
    return false;
}

json validate(const std::string& sub, json cfg) {
    const auto& fields = schema_fields(sub);
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        bool known = false;
        for (const auto& f : fields)
            if (it.key() == f.key) known = true;
        if (!known)
            throw std::invalid_argument("config: unknown key '" + it.key() + "' for " + sub);
    }
    for (const auto& f : fields) {
        if (!cfg.contains(f.key)) {
            if (f.required)
                throw std::invalid_argument(std::string("config: missing required key '") +
                                            f.key + "'");
            cfg[f.key] = f.def;
        } else if (!type_ok(cfg[f.key], f.type)) {
            throw std::invalid_argument(std::string("config: key '") + f.key +
                                        "' has wrong type (want " + f.type + ")");
        }
    }
    return cfg;
}

void add(std::vector<Assertion>& as, const std::string& name, bool pass, double value,
         double threshold, const std::string& detail = "") {
    as.push_back({name, pass, value, threshold, detail});
}

std::vector<double> to_vec(const json& arr) {
    std::vector<double> v;
    for (const auto& x : arr) v.push_back(x.get<double>());
    return v;
}
std::vector<std::int64_t> to_ivec(const json& arr) {
    std::vector<std::int64_t> v;
    for (const auto& x : arr) v.push_back(x.get<std::int64_t>());
    return v;
}

// ---- experiment bodies -------------------------------------------------

void run_validate_walk(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
                       json& extra) {
    auto law = walks::law_by_name(cfg["law"].get<std::string>());
    auto rep = walks::validate_step_law(law);
    add(as, "accepted", rep.accepted, rep.accepted ? 1 : 0, 1, rep.violation);
    extra["moments"] = {{"mean", rep.mean},
                        {"variance", rep.variance},
                        {"third", rep.third},
                        {"fourth", rep.fourth},
                        {"period", rep.period},
                        {"exact", rep.moments_exact}};
    (void)dir;
}

void run_kernels(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
                 json& extra) {
    auto law = walks::law_by_name(cfg["law"].get<std::string>());
    const std::int64_t n_max = cfg["n_max"].get<std::int64_t>();
    walks::KernelTable kt = cfg["with_K"].get<bool>() ? walks::build_kernel_table(law, n_max)
                                                      : walks::build_return_table(law, n_max);
    add(as, "p0_convention", kt.p0[0] == 1.0, kt.p0[0], 1.0);
    add(as, "quad_error", kt.quad_error < 1e-13, kt.quad_error, 1e-13);
    // local limit + overlap asymptotics snapshots
    const double lltr =
        std::sqrt(2 * M_PI * static_cast<double>(n_max)) * kt.p0[static_cast<std::size_t>(n_max)];
    const double rr = 2 * M_PI * kt.R_at(n_max) / std::log(static_cast<double>(n_max));
    extra["sqrt2pin_p_n"] = lltr;
    extra["2piR_over_logN"] = rr;
    if (kt.has_K()) {
        auto ka = walks::k_asymptotics_check(kt, std::min<std::int64_t>(1000, n_max / 2));
        add(as, "K_ratio_band", ka.in_band, ka.max_ratio_tail, 1.1);
        add(as, "K_mass_below_1", ka.k_mass <= 1.0 + 1e-12, ka.k_mass, 1.0);
        extra["K_ratio_tail"] = {{"min", ka.min_ratio_tail}, {"max", ka.max_ratio_tail}};
    }
    if (cfg["csv"].get<bool>())
        walks::kernel_table_csv(dir + "/kernels.csv", kt);
    auto cache = cfg["cache"].get<std::string>();
    if (!cache.empty()) walks::save_kernel_table(cache, kt);
}

void run_beta(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
              json& extra) {
    auto law = walks::law_by_name(cfg["law"].get<std::string>());
    auto dis = disorder::disorder_by_name(cfg["disorder"].get<std::string>());
    const std::int64_t N = cfg["N"].get<std::int64_t>();
    const double vt = cfg["vartheta"].get<double>();
    auto kt = walks::build_return_table(law, N);
    auto w = disorder::solve_critical_beta(dis, N, vt, kt.R_at(N));
    add(as, "solver_residual", w.residual < 1e-14, w.residual, 1e-14);
    extra["window"] = {{"N", w.N},        {"vartheta", w.vartheta}, {"R_N", w.R_N},
                       {"sigma2", w.sigma2}, {"beta", w.beta},      {"lambda_N", w.lambda_N}};
    io::write_csv(dir + "/window.csv", {"N", "vartheta", "R_N", "sigma2", "beta", "lambda_N"},
                  {{static_cast<double>(w.N)}, {w.vartheta}, {w.R_N}, {w.sigma2}, {w.beta},
                   {w.lambda_N}});
}

void run_partition(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
                   json& extra) {
    auto law = walks::law_by_name(cfg["law"].get<std::string>());
    auto dis = disorder::disorder_by_name(cfg["disorder"].get<std::string>());
    const std::int64_t N = cfg["N"].get<std::int64_t>();
    const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
    const int workers = cfg["workers"].get<int>();
    const std::string op = cfg["op"].get<std::string>();
    auto kt = walks::build_kernel_table(law, N);
    double beta = cfg["beta"].get<double>();
    if (beta < 0) {
        auto w = disorder::solve_critical_beta(dis, N, cfg["vartheta"].get<double>(), kt.R_at(N));
        beta = w.beta;
    }
    if (op == "chaos") {
        auto field = disorder::zeta_field(dis, beta, 0, N, seed, 0);
        const double z1 = partition::chaos_eval(field, N, kt);
        const double z2 = partition::point_to_line_via_pin(field, N, kt);
        add(as, "chaos_vs_pin_decomposition", std::abs(z1 - z2) < 1e-12, std::abs(z1 - z2),
            1e-12);
        extra["Z"] = z1;
    } else if (op == "decomposition") {
        auto phi = cont::test_fn(cfg["phi"].get<std::string>());
        auto psi = cont::test_fn(cfg["psi"].get<std::string>());
        const std::int64_t samples = cfg["samples"].get<std::int64_t>();
        double max_gap = 0;
        auto gaps = mc::ensemble(samples, workers, [&](std::int64_t i) {
            auto field = disorder::zeta_field(dis, beta, 0, N, seed,
                                              static_cast<std::uint64_t>(i));
            return partition::decomposition_identity_gap(field, N, phi, psi, law, kt);
        });
        for (double g : gaps) max_gap = std::max(max_gap, g);
        add(as, "decomposition_max_gap", max_gap < 1e-10, max_gap, 1e-10);
        io::write_csv(dir + "/decomposition_gaps.csv", {"sample", "gap"},
                      {[&] {
                           std::vector<double> idx(gaps.size());
                           for (std::size_t i = 0; i < gaps.size(); ++i)
                               idx[i] = static_cast<double>(i);
                           return idx;
                       }(),
                       gaps});
    } else if (op == "free-energy") {
        const double h = cfg["h"].get<double>();
        std::vector<double> vals;
        auto est = partition::free_energy_estimate(dis, beta, h, N,
                                                   cfg["samples"].get<std::int64_t>(), seed,
                                                   workers, kt, &vals);
        const double jensen = partition::pure_free_energy_bound(h, N, kt);
        add(as, "jensen_bound", est.mean <= jensen + 3 * est.stderr_, est.mean, jensen);
        extra["estimate"] = {{"mean", est.mean},
                             {"stderr", est.stderr_},
                             {"n", est.n_samples},
                             {"jensen_upper", jensen}};
        io::write_csv(dir + "/free_energy.csv", {"sample", "value"},
                      {[&] {
                           std::vector<double> idx(vals.size());
                           for (std::size_t i = 0; i < vals.size(); ++i)
                               idx[i] = static_cast<double>(i);
                           return idx;
                       }(),
                       vals});
    } else {
        throw std::invalid_argument("partition: unknown op " + op);
    }
}

void run_moments(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
                 json& extra) {
    auto law = walks::law_by_name(cfg["law"].get<std::string>());
    auto dis = disorder::disorder_by_name(cfg["disorder"].get<std::string>());
    const std::int64_t N = cfg["N"].get<std::int64_t>();
    const double vt = cfg["vartheta"].get<double>();
    const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
    const int workers = cfg["workers"].get<int>();
    auto phi = cont::test_fn(cfg["phi"].get<std::string>());
    auto psi = cont::test_fn(cfg["psi"].get<std::string>());
    auto kt = walks::build_return_table(law, N);
    auto w = disorder::solve_critical_beta(dis, N, vt, kt.R_at(N));
    auto pk = partition::build_polymer_kernels(law, N, phi, psi);
    auto ubar = dickman::build_ubar(N, w.sigma2, kt);
    const double m2_exact = partition::exact_second_moment(pk, ubar);
    const double g_mean = cont::pair_phi_psi(phi, psi, 1.0, 1e-9);
    const std::int64_t samples = cfg["samples"].get<std::int64_t>();
    auto vals = mc::ensemble(samples, workers, [&](std::int64_t i) {
        auto field = disorder::zeta_field(dis, w.beta, 0, N, seed, static_cast<std::uint64_t>(i));
        return partition::polymer_integral(field, pk, kt);
    });
    auto est = mc::summarize(vals, seed);
    double m2_emp = 0;
    for (double v : vals) m2_emp += v * v;
    m2_emp /= static_cast<double>(vals.size());
    double m2_err = 0;
    for (double v : vals) m2_err += (v * v - m2_emp) * (v * v - m2_emp);
    m2_err = std::sqrt(m2_err / static_cast<double>(vals.size() - 1) /
                       static_cast<double>(vals.size()));
    add(as, "mc_mean_vs_exact", std::abs(est.mean - pk.c) <= 3 * est.stderr_,
        std::abs(est.mean - pk.c), 3 * est.stderr_);
    add(as, "mc_m2_vs_exact", std::abs(m2_emp - m2_exact) <= 3 * m2_err,
        std::abs(m2_emp - m2_exact), 3 * m2_err);
    extra["mean_exact"] = pk.c;
    extra["mean_mc"] = est.mean;
    extra["g_limit"] = g_mean;
    extra["m2_exact"] = m2_exact;
    extra["m2_mc"] = m2_emp;
    io::write_csv(dir + "/polymer_samples.csv", {"seed", "value"},
                  {[&] {
                       std::vector<double> idx(vals.size());
                       for (std::size_t i = 0; i < vals.size(); ++i)
                           idx[i] = static_cast<double>(i);
                       return idx;
                   }(),
                   vals});
}

void run_dickman(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
                 json& extra) {
    auto s_list = to_vec(cfg["s_list"]);
    const double t_max = cfg["t_max"].get<double>();
    const int grid = cfg["grid"].get<int>();
    std::vector<double> cs, ct, cf;
    for (double s : s_list) {
        dickman::DickmanDensity d(s, t_max);
        for (int i = 1; i <= grid; ++i) {
            double t = t_max * i / grid;
            cs.push_back(s);
            ct.push_back(t);
            cf.push_back(d.value(t));
        }
        // normalization with analytic tail bound
        double T = t_max;
        while (dickman::DickmanDensity::tail_bound(s, T) > 2e-7 && T < 64) T += 1.0;
        dickman::DickmanDensity dd(s, T);
        auto mass = quad::integrate_doubling([&](double t) { return dd.value(t); }, 1e-12, T,
                                             1e-8, 16, 18);
        const double total = mass.value + dickman::DickmanDensity::tail_bound(s, T);
        add(as, "normalization_s" + std::to_string(s), std::abs(mass.value - 1) < 1e-6 ||
                                                           std::abs(total - 1) < 1e-6,
            mass.value, 1.0);
    }
    io::write_csv(dir + "/dickman.csv", {"s", "t", "f"}, {cs, ct, cf});
    extra["t_max"] = t_max;
}

void run_gtheta(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
                json& extra) {
    const double vt = cfg["vartheta"].get<double>();
    dickman::GTheta g(vt, 4.0);
    auto ts = to_vec(cfg["t_list"]);
    std::vector<double> gv;
    for (double t : ts) gv.push_back(g.value(t));
    io::write_csv(dir + "/gtheta.csv", {"t", "G"}, {ts, gv});
    // small-t shape
    double r6 = 1e-6 * g.value(1e-6) * std::pow(std::log(1e6), 2);
    add(as, "small_t_ratio", r6 > 0.7 && r6 < 1.3, r6, 1.0);
    if (cfg["renewal_check"].get<bool>()) {
        for (auto [t, tb] : {std::pair{0.8, 0.4}, std::pair{0.5, 0.25}}) {
            const double rel = dickman::renewal_identity_rel_error(g, t, tb);
            add(as, "renewal_identity_t" + std::to_string(t), rel < 1e-3, rel, 1e-3);
        }
    }
    extra["vartheta"] = vt;
}

void run_cg(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
            json& extra) {
    auto law = walks::law_by_name(cfg["law"].get<std::string>());
    auto dis = disorder::disorder_by_name(cfg["disorder"].get<std::string>());
    const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
    const int workers = cfg["workers"].get<int>();
    const int keps = cfg["keps"].get<int>();
    const double vt = cfg["vartheta"].get<double>();
    auto phi = cont::test_fn(cfg["phi"].get<std::string>());
    auto psi = cont::test_fn(cfg["psi"].get<std::string>());
    const std::string op = cfg["op"].get<std::string>();
    if (op == "l2") {
        auto rows = cg::l2_distance_experiment(dis, cfg["n"].get<std::int64_t>(),
                                               to_vec(cfg["eps"]), keps, phi, psi, vt,
                                               cfg["samples"].get<std::int64_t>(), seed,
                                               workers, law);
        std::vector<double> ce, cv, cs;
        bool decreasing = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            ce.push_back(rows[i].eps);
            cv.push_back(rows[i].l2);
            cs.push_back(rows[i].l2_stderr);
            if (i > 0 && rows[i].l2 > rows[i - 1].l2) decreasing = false;
        }
        add(as, "l2_decreasing_in_inverse_eps", decreasing, rows.back().l2, rows.front().l2);
        io::write_csv(dir + "/cg_l2.csv", {"eps", "l2", "stderr"}, {ce, cv, cs});
    } else if (op == "converge") {
        auto conv = cg::cg_convergence_experiment(dis, to_vec(cfg["eps"])[0], keps,
                                                  to_ivec(cfg["n_list"]), phi, psi, vt,
                                                  cfg["samples"].get<std::int64_t>(), seed,
                                                  workers, law);
        std::vector<double> ci, cj, ck;
        for (std::size_t i = 0; i < conv.N_list.size(); ++i)
            for (std::size_t j = i + 1; j < conv.N_list.size(); ++j) {
                ci.push_back(static_cast<double>(conv.N_list[i]));
                cj.push_back(static_cast<double>(conv.N_list[j]));
                ck.push_back(conv.ks[i][j]);
            }
        io::write_csv(dir + "/cg_ks.csv", {"N_i", "N_j", "KS"}, {ci, cj, ck});
        if (conv.N_list.size() >= 3) {
            add(as, "ks_decreasing_in_N", conv.ks[0][1] > conv.ks[1][2], conv.ks[1][2],
                conv.ks[0][1]);
        }
        for (std::size_t i = 0; i < conv.means.size(); ++i)
            add(as, "mean_vs_det_N" + std::to_string(conv.N_list[i]),
                std::abs(conv.means[i] - conv.det_term) <= 3 * conv.stderrs[i],
                std::abs(conv.means[i] - conv.det_term), 3 * conv.stderrs[i]);
    } else if (op == "moments") {
        const std::int64_t N = cfg["n"].get<std::int64_t>();
        const double eps = to_vec(cfg["eps"])[0];
        auto grid = cg::make_meso_grid(N, eps, keps);
        auto kt = walks::build_return_table(law, N);
        auto w = disorder::solve_critical_beta(dis, N, vt, kt.R_at(N));
        std::vector<cg::TimeBlock> blocks;
        const int base = grid.K_eps;
        blocks.emplace_back(base, base);
        if (base + 1 <= grid.M - grid.K_eps) blocks.emplace_back(base, base + 1);
        if (base + 3 <= grid.M - grid.K_eps) blocks.emplace_back(base, base + 3);
        auto rep = cg::theta_moment_experiment(dis, w.beta, grid, blocks,
                                               cfg["samples"].get<std::int64_t>(), seed,
                                               workers, kt);
        std::vector<double> bw, m2, m2e, m4, m4e;
        for (const auto& r : rep.rows) {
            bw.push_back(cg::block_width(r.blk));
            m2.push_back(r.m2);
            m2e.push_back(r.m2_stderr);
            m4.push_back(r.m4);
            m4e.push_back(r.m4_stderr);
        }
        io::write_csv(dir + "/cg_moments.csv", {"width", "m2", "m2_stderr", "m4", "m4_stderr"},
                      {bw, m2, m2e, m4, m4e});
        add(as, "disjoint_cov_zero",
            std::abs(rep.disjoint_cov) <= 3 * rep.disjoint_cov_stderr,
            std::abs(rep.disjoint_cov), 3 * rep.disjoint_cov_stderr);
        bool dec = true;
        for (std::size_t i = 1; i < rep.rows.size(); ++i)
            if (rep.rows[i].m2 > rep.rows[i - 1].m2) dec = false;
        add(as, "variance_decreasing_in_width", dec, rep.rows.back().m2, rep.rows.front().m2);
    } else {
        throw std::invalid_argument("cg: unknown op " + op);
    }
    extra["keps"] = keps;
}

void run_she(const json& cfg, const std::string& dir, std::vector<Assertion>& as,
             json& extra) {
    she::Mollifier rho;
    const double delta2 = cfg["delta2"].get<double>();
    const double theta = cfg["theta"].get<double>();
    auto f = cont::test_fn(cfg["f"].get<std::string>());
    const double dt = (1.0 / delta2) / cfg["dt_factor"].get<double>();
    auto win = she::make_continuum_window(delta2, theta, rho);
    extra["window"] = {{"beta2", win.beta2},
                       {"vartheta", win.vartheta},
                       {"R_delta", win.R},
                       {"residual", win.residual}};
    auto m2 = she::she_second_moment_semianalytic(delta2, theta, f, rho,
                                                  cfg["grid"].get<int>());
    extra["second_moment"] = {{"value", m2.value},
                              {"mean_sq", m2.mean_sq},
                              {"limit", m2.limit_value}};
    auto res = she::she_mc(delta2, theta, f, rho, dt, cfg["dx"].get<double>(),
                           cfg["noises"].get<std::int64_t>(), cfg["seed"].get<std::uint64_t>(),
                           cfg["workers"].get<int>());
    const double fint = std::sqrt(m2.mean_sq);
    add(as, "mean_vs_int_f", std::abs(res.estimate.mean - fint) <= 3 * res.estimate.stderr_,
        std::abs(res.estimate.mean - fint), 3 * res.estimate.stderr_);
    const double var_semi = m2.value - m2.mean_sq;
    add(as, "variance_vs_semianalytic",
        std::abs(res.estimate.variance - var_semi) <= 0.25 * var_semi,
        res.estimate.variance, var_semi);
    std::vector<double> idx(res.per_noise.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    io::write_csv(dir + "/she_samples.csv", {"noise_index", "value"}, {idx, res.per_noise});
    extra["mc"] = {{"mean", res.estimate.mean},
                   {"stderr", res.estimate.stderr_},
                   {"variance", res.estimate.variance},
                   {"dt", res.dt},
                   {"dx", res.dx},
                   {"n_steps", res.n_steps}};
}

} // namespace

std::vector<std::string> subcommands() {
    return {"validate-walk", "kernels", "beta", "partition", "moments",
            "dickman",       "gtheta",  "cg",   "she",       "report"};
}

json schema(const std::string& sub) {
    json out = json::object();
    for (const auto& f : schema_fields(sub))
        out[f.key] = {{"type", f.type}, {"required", f.required}, {"default", f.def}};
    return out;
}

RunResult run(const std::string& subcommand, json config) {
    if (subcommand == "report") {
        json cfg = validate("report", std::move(config));
        RunResult r;
        r.manifest["report"] = report(cfg["dir"].get<std::string>());
        return r;
    }
    json cfg = validate(subcommand, std::move(config));
    const std::string dir = cfg["out_dir"].get<std::string>();
    fs::create_directories(dir);

    std::vector<Assertion> as;
    json extra = json::object();
    auto t0 = std::chrono::steady_clock::now();
    if (subcommand == "validate-walk")
        run_validate_walk(cfg, dir, as, extra);
    else if (subcommand == "kernels")
        run_kernels(cfg, dir, as, extra);
    else if (subcommand == "beta")
        run_beta(cfg, dir, as, extra);
    else if (subcommand == "partition")
        run_partition(cfg, dir, as, extra);
    else if (subcommand == "moments")
        run_moments(cfg, dir, as, extra);
    else if (subcommand == "dickman" || subcommand == "dickman-table")
        run_dickman(cfg, dir, as, extra);
    else if (subcommand == "gtheta")
        run_gtheta(cfg, dir, as, extra);
    else if (subcommand == "cg")
        run_cg(cfg, dir, as, extra);
    else if (subcommand == "she")
        run_she(cfg, dir, as, extra);
    else
        throw std::invalid_argument("unknown subcommand: " + subcommand);
    auto t1 = std::chrono::steady_clock::now();

    RunResult res;
    json jas = json::array();
    for (const auto& a : as) {
        res.all_pass = res.all_pass && a.pass;
        jas.push_back({{"name", a.name},
                       {"pass", a.pass},
                       {"value", a.value},
                       {"threshold", a.threshold},
                       {"detail", a.detail}});
    }
    const std::string cfg_dump = cfg.dump();
    res.manifest = {{"subcommand", subcommand},
                    {"config", cfg},
                    {"config_hash", io::fnv1a(cfg_dump)},
                    {"code_version", "pinlab-1.0"},
                    {"assertions", jas},
                    {"all_pass", res.all_pass},
                    {"wall_time_s", std::chrono::duration<double>(t1 - t0).count()},
                    {"results", extra}};
    char name[128];
    std::snprintf(name, sizeof name, "%s/manifest_%s_%016llx.json", dir.c_str(),
                  subcommand.c_str(),
                  static_cast<unsigned long long>(io::fnv1a(cfg_dump)));
    res.manifest_path = name;
    std::ofstream os(name);
    os << res.manifest.dump(2) << "\n";
    return res;
}

std::string report(const std::string& dir) {
    std::string out;
    std::vector<std::vector<double>> cols(3);
    std::vector<std::string> names;
    out += "subcommand                     pass  assertions\n";
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string p = entry.path().filename().string();
        if (p.rfind("manifest_", 0) != 0 || entry.path().extension() != ".json") continue;
        std::ifstream is(entry.path());
        json m = json::parse(is);
        int npass = 0, total = 0;
        for (const auto& a : m["assertions"]) {
            ++total;
            if (a["pass"].get<bool>()) ++npass;
        }
        char line[256];
        std::snprintf(line, sizeof line, "%-30s %-5s %d/%d\n",
                      m["subcommand"].get<std::string>().c_str(),
                      m["all_pass"].get<bool>() ? "ok" : "FAIL", npass, total);
        out += line;
    }
    std::ofstream os(dir + "/report.txt");
    os << out;
    return out;
}

} // namespace pinlab::harness
