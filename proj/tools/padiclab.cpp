// Command-line driver: runs the verification suites and writes one report
// per suite.  Exit codes: 0 all checks passed, 1 identity failure, 2
// configuration error, 3 budget exceeded.

#include <CLI11.hpp>

#include <future>
#include <iostream>
#include <memory>
#include <random>

#include "padiclab/cm.hpp"
#include "padiclab/config.hpp"
#include "padiclab/katz.hpp"
#include "padiclab/quaternion.hpp"
#include "padiclab/report.hpp"
#include "padiclab/spheres.hpp"
#include "padiclab/ssgraph.hpp"
#include "padiclab/theta.hpp"

using namespace padiclab;

namespace {

struct SuiteStatus {
    long long checks = 0;
    long long failures = 0;
    bool budget_exceeded = false;

    void merge(const SuiteStatus& o) {
        checks += o.checks;
        failures += o.failures;
        budget_exceeded = budget_exceeded || o.budget_exceeded;
    }
};

std::string join_vec(const std::vector<long long>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        s += std::to_string(v[i]);
        if (i + 1 < v.size()) s += ",";
    }
    return s + "]";
}

std::vector<long long> supersingular_fundamentals(long long p, long long dmax) {
    std::vector<long long> out;
    for (long long d = -3; d >= -dmax; --d)
        if (is_fundamental_discriminant(d) && classify_padic(d, p)) out.push_back(d);
    return out;
}

SuiteStatus run_ssgraph(const RunConfig& cfg) {
    SuiteStatus st;
    ReportWriter mass(cfg, "ssgraph_mass", {"p", "classes", "mass_ok"});
    ReportWriter brandt(cfg, "ssgraph_brandt",
                        {"p", "ell", "row_sums_ok", "self_adjoint_ok", "square_recursion_ok",
                         "vss_eigenvector_ok", "ramanujan_ok"});
    for (int ell : {2, 3, 5, 7}) {
        ++st.checks;
        try {
            load_modular_polynomial(ell);
        } catch (const identity_error& e) {
            ++st.failures;
            std::cerr << "ssgraph: modular polynomial " << ell << ": " << e.what() << "\n";
        }
    }
    for (long long p : cfg.primes) {
        if (!is_prime(p)) continue;
        try {
            auto ss = supersingular_set(p);
            mass.row({std::to_string(p), std::to_string(ss.size()), "1"});
            ++st.checks;  // mass formula is asserted inside the constructor
            std::vector<long long> ells;
            for (long long ell : {2LL, 3LL, 5LL, 7LL})
                if (ell != p) ells.push_back(ell);
            SpectralReport rep = spectral_report(ss, ells);
            for (size_t k = 0; k < ells.size(); ++k) {
                long long ell = ells[k];
                auto B = brandt_matrix(ss, ell);
                bool rows_ok = brandt_row_sums_ok(ss, B);
                bool adj_ok = brandt_self_adjoint(ss, B);
                auto B2 = brandt_matrix(ss, ell * ell);
                auto sq = detail::mat_mul(B.entries, B.entries);
                for (size_t i = 0; i < ss.size(); ++i) sq[i][i] -= ell;
                bool rec_ok = B2.entries == sq;
                st.checks += 5;
                if (!rows_ok || !adj_ok || !rec_ok || !rep.vss_exact_eigenvector ||
                    !rep.ramanujan_ok)
                    ++st.failures;
                brandt.row({std::to_string(p), std::to_string(ell), rows_ok ? "1" : "0",
                            adj_ok ? "1" : "0", rec_ok ? "1" : "0",
                            rep.vss_exact_eigenvector ? "1" : "0",
                            rep.ramanujan_ok ? "1" : "0"});
            }
        } catch (const budget_error& e) {
            st.budget_exceeded = true;
            std::cerr << "ssgraph: p=" << p << ": " << e.what() << "\n";
        } catch (const identity_error& e) {
            ++st.failures;
            std::cerr << "ssgraph: p=" << p << ": " << e.what() << "\n";
        }
    }
    return st;
}

SuiteStatus run_quaternion(const RunConfig& cfg) {
    SuiteStatus st;
    ReportWriter w(cfg, "quaternion_embeddings", {"p", "d", "count", "expected", "match"});
    for (long long p : cfg.primes) {
        if (p != 2 && p != 3 && p != 5 && p != 7 && p != 13) continue;
        auto ord = maximal_order(p);
        auto L = gross_lattice(ord);
        for (long long d : supersingular_fundamentals(p, cfg.dmax)) {
            try {
                auto g = gross_count(ord, L, d);
                ++st.checks;
                if (!g.match) {
                    ++st.failures;
                    std::cerr << "quaternion: count mismatch at p=" << p << " d=" << d << "\n";
                }
                w.row({std::to_string(p), std::to_string(d), std::to_string(g.count),
                       g.expected.str(), g.match ? "1" : "0"});
            } catch (const budget_error&) {
                st.budget_exceeded = true;
            }
        }
    }
    return st;
}

SuiteStatus run_cm(const RunConfig& cfg) {
    SuiteStatus st;
    // the residual report has a pinned JSON schema with typed fields, so it
    // bypasses the generic writer in json mode
    nlohmann::json resid_json = nlohmann::json::array();
    std::unique_ptr<ReportWriter> resid_tsv;
    if (cfg.format == "tsv")
        resid_tsv = std::make_unique<ReportWriter>(
            cfg, "cm_residual",
            std::vector<std::string>{"p", "D", "vector", "deg", "deviation"});
    ReportWriter zhang(cfg, "cm_zhang",
                       {"p", "d", "f", "hecke_ok", "degree_ok", "ppower_checked", "ppower_ok"});
    for (long long p : cfg.primes) {
        if (!is_prime(p)) continue;
        auto ss = supersingular_set(p);
        auto ds = supersingular_fundamentals(p, cfg.dmax);
        // residual ladder, parallel over discriminants
        std::vector<ResidualReport> reports(ds.size());
        std::vector<char> ok(ds.size(), 1);
        auto worker = [&](size_t lo, size_t hi) {
            for (size_t i = lo; i < hi; ++i) {
                try {
                    reports[i] = residual_report(ss, ds[i], 1, cfg.classpoly_cap);
                } catch (const budget_error&) {
                    ok[i] = 0;
                }
            }
        };
        size_t nj = (size_t)std::max(1, cfg.jobs);
        std::vector<std::future<void>> futs;
        size_t chunk = (ds.size() + nj - 1) / nj;
        for (size_t lo = 0; lo < ds.size(); lo += chunk)
            futs.push_back(std::async(std::launch::async, worker, lo,
                                      std::min(ds.size(), lo + chunk)));
        for (auto& f : futs) f.get();
        for (size_t i = 0; i < ds.size(); ++i) {
            if (!ok[i]) {
                st.budget_exceeded = true;
                continue;
            }
            const auto& r = reports[i];
            ++st.checks;
            if (resid_tsv) {
                resid_tsv->row({std::to_string(p), std::to_string(r.D), join_vec(r.vector),
                                std::to_string(r.deg),
                                std::to_string(r.max_deviation.to_double())});
            } else {
                resid_json.push_back({{"p", p},
                                      {"D", r.D},
                                      {"vector", r.vector},
                                      {"deg", r.deg},
                                      {"deviation", r.max_deviation.to_double()}});
            }
        }
        if (!resid_tsv) {
            std::filesystem::create_directories(cfg.out);
            std::ofstream os(cfg.out + "/cm_residual.json", std::ios::binary | std::ios::trunc);
            os << resid_json.dump(1) << "\n";
        }
        // zhang identities
        ReductionVectorCache cache;
        for (long long d : ds) {
            for (long long f = 1; f <= cfg.fmax; ++f) {
                if (f % p == 0) continue;
                bool supported = true;
                for (auto [q, e] : factorize(f))
                    if (q > 7) supported = false;
                if (!supported || -d * f * f > cfg.classpoly_cap) continue;
                try {
                    auto rep = zhang_consistency(ss, d, f, cfg.classpoly_cap, 2, &cache);
                    st.checks += 2 + (long long)rep.id_ppower.size();
                    if (!rep.all_ok()) {
                        ++st.failures;
                        std::cerr << "cm: zhang failure p=" << p << " d=" << d << " f=" << f
                                  << ": " << rep.detail << "\n";
                    }
                    int pchecked = (int)rep.id_ppower.size();
                    bool pok = true;
                    for (auto [r, okk] : rep.id_ppower) pok = pok && okk;
                    zhang.row({std::to_string(p), std::to_string(d), std::to_string(f),
                               rep.id_hecke ? "1" : "0", rep.id_degree ? "1" : "0",
                               std::to_string(pchecked), pok ? "1" : "0"});
                } catch (const budget_error&) {
                    st.budget_exceeded = true;
                }
            }
        }
    }
    return st;
}

SuiteStatus run_genus(const RunConfig& cfg) {
    SuiteStatus st;
    ReportWriter w(cfg, "genus_partition",
                   {"p", "d", "f", "deg_plus", "deg_minus", "shape_ok"});
    for (long long p : cfg.primes) {
        if (!is_prime(p)) continue;
        for (long long d = -3; d >= -cfg.dmax; --d) {
            if (!is_fundamental_discriminant(d) || d % p != 0) continue;
            bool prime_disc = prime_quadratic_factorization(d).size() == 1;
            for (long long f = 1; f <= cfg.fmax; ++f) {
                if (f % p == 0) continue;
                auto g = genus_partition(d, f, p);
                bool shape_ok;
                if (prime_disc) {
                    int chi = kronecker(d, f);
                    shape_ok = (chi == 1) ? (g.deg_minus == 0) : (g.deg_plus == 0);
                } else {
                    shape_ok = g.deg_plus == g.deg_minus;
                }
                ++st.checks;
                if (!shape_ok) {
                    ++st.failures;
                    std::cerr << "genus: split shape fails at p=" << p << " d=" << d
                              << " f=" << f << "\n";
                }
                w.row({std::to_string(p), std::to_string(d), std::to_string(f),
                       std::to_string(g.deg_plus), std::to_string(g.deg_minus),
                       shape_ok ? "1" : "0"});
            }
        }
    }
    return st;
}

SuiteStatus run_katz(const RunConfig& cfg) {
    SuiteStatus st;
    ReportWriter w(cfg, "katz",
                   {"p", "d", "f", "r", "degree_ok", "support_ok", "deepest_ok"});
    ReportWriter deg(cfg, "katz_degrees", {"p", "m", "grid_ok"});
    for (long long p : cfg.primes) {
        if (!is_prime(p)) continue;
        for (int m = 0; m <= 6; ++m) {
            bool grid_ok = true;
            for (long long num = 0; num <= 50; ++num) {
                Rational x = Rational(num, 50) * Rational(p, p + 1);
                auto D = tau(p, m, x);
                if (divisor_degree(D) != sigma1(pow_ll(p, m))) grid_ok = false;
            }
            ++st.checks;
            if (!grid_ok) ++st.failures;
            deg.row({std::to_string(p), std::to_string(m), grid_ok ? "1" : "0"});
        }
        for (long long d : supersingular_fundamentals(p, std::min(cfg.dmax, 200LL))) {
            for (long long f = 1; f <= std::min(cfg.fmax, 3LL); ++f) {
                if (f % p == 0) continue;
                for (int r = 1; r <= 3; ++r) {
                    auto rep = katz_consistency(d, f, p, r);
                    ++st.checks;
                    if (!rep.all_ok()) {
                        ++st.failures;
                        std::cerr << "katz: failure at p=" << p << " d=" << d << " f=" << f
                                  << " r=" << r << "\n";
                    }
                    w.row({std::to_string(p), std::to_string(d), std::to_string(f),
                           std::to_string(r), rep.degree_ok ? "1" : "0",
                           rep.support_ok ? "1" : "0",
                           rep.deepest_multiplicity_ok ? "1" : "0"});
                }
            }
        }
    }
    return st;
}

SuiteStatus run_spheres(const RunConfig& cfg, const std::string& form_path) {
    SuiteStatus st;
    ReportWriter dev(cfg, "spheres_deviation",
                     {"m", "num_points", "max_dev", "bound_ratio", "variance_identity_ok"});
    ReportWriter hensel(cfg, "spheres_hensel", {"p", "r", "ell", "m", "equal"});
    ReportWriter linnik(cfg, "spheres_linnik",
                        {"m", "skipped", "u", "num_points", "tv_distance"});
    auto Q4 = form_path.empty() ? QuadFormZ::sum_of_squares(4)
                                : QuadFormZ::read_file(form_path);
    std::cerr << "spheres: reference measure assumes O_Q(Z_p) acts transitively on the "
                 "sphere (not decided algorithmically; orbit spot checks in the theta "
                 "suite cover n = 3, p^r <= 5)\n";
    long long p = 3;
    for (long long q : cfg.primes)
        if (q % 2 == 1 && is_prime(q)) { p = q; break; }
    int r = cfg.res;
    try {
        auto ref = reduced_sphere(Q4, 1, p, r, 24, cfg.budget);
        if (!ref.complete()) {
            std::cerr << "spheres: reference sphere left undecided residues "
                         "(transitivity not verified; reference measure assumes it)\n";
        }
        std::mt19937_64 rng(cfg.seed);
        std::vector<long long> ladder;
        long long pr = pow_ll(p, r);
        for (long long m = 1; m <= 10000; m += 1 + (long long)(rng() % 97))
            if (m % p != 0 && (m - 1) % pr == 0) ladder.push_back(m);
        for (long long m : ladder) {
            auto pts = Q4.lattice_points(m, cfg.budget);
            if (pts.empty()) continue;
            if (ref.residues.empty()) {
                std::cerr << "spheres: empty reference sphere, skipping ladder\n";
                break;
            }
            try {
                auto chk = variance_identity_check(Q4, m, p, r, ref.residues, &pts);
                auto repd = deviation_report(Q4, m, p, r, ref.residues, &pts);
                st.checks += 1;
                if (!chk.equal) {
                    ++st.failures;
                    std::cerr << "spheres: variance identity fails at m=" << m << "\n";
                }
                dev.row({std::to_string(m), std::to_string(repd.num_points),
                         std::to_string(repd.max_dev.to_double()),
                         std::to_string(repd.bound_ratio), chk.equal ? "1" : "0"});
            } catch (const std::invalid_argument& e) {
                // containment can only fail when the reference sphere was
                // left incomplete by the depth cap
                std::cerr << "spheres: m=" << m << ": " << e.what() << "\n";
                ++st.failures;
            }
        }
        // Linnik pushforward table over the same ladder
        try {
            auto rows = linnik_pushforward_test(Q4, 1, p, r, ladder,
                                                Q4.dim() == 3 ? 100 : 0);
            for (const auto& row : rows)
                linnik.row({std::to_string(row.m), row.skipped ? row.reason : "0",
                            std::to_string(row.u), std::to_string(row.num_points),
                            std::to_string(row.tv_distance)});
        } catch (const budget_error&) {
            st.budget_exceeded = true;
        }

        // Hensel equality grid on the ternary form
        auto Q3 = QuadFormZ::sum_of_squares(3);
        for (long long pp : {3LL, 5LL}) {
            for (int rr : {1, 2}) {
                for (long long ell : {1LL, 2LL}) {
                    auto base = reduced_sphere(Q3, ell, pp, rr, 24, cfg.budget);
                    for (long long k : {1LL, 3LL}) {
                        long long m = ell + k * pow_ll(pp, rr);
                        auto other = reduced_sphere(Q3, m, pp, rr, 24, cfg.budget);
                        bool eq = base.residues == other.residues;
                        ++st.checks;
                        if (!eq) {
                            ++st.failures;
                            std::cerr << "spheres: hensel equality fails p=" << pp
                                      << " r=" << rr << " ell=" << ell << " m=" << m << "\n";
                        }
                        hensel.row({std::to_string(pp), std::to_string(rr),
                                    std::to_string(ell), std::to_string(m), eq ? "1" : "0"});
                    }
                }
            }
        }
    } catch (const budget_error& e) {
        st.budget_exceeded = true;
        std::cerr << "spheres: " << e.what() << "\n";
    }
    return st;
}

SuiteStatus run_theta(const RunConfig& cfg) {
    SuiteStatus st;
    ReportWriter w(cfg, "theta_cusps", {"orbit_size", "c", "constancy_ok", "cusp_limit_max"});
    ReportWriter decay(cfg, "theta_decay", {"kind", "slope", "reference"});
    auto Q3 = QuadFormZ::sum_of_squares(3);
    try {
        OrthogonalGroupModPr G(Q3, 3, 1);
        for (const auto& orb : G.all_orbits()) {
            if (orb.count(Vec{0, 0, 0})) continue;
            auto sigma = std::vector<Vec>(orb.begin(), orb.end());
            auto basis = basis_complement(sigma);
            for (long long c = 1; c <= 12; ++c) {
                int s = (c % 3 == 0) ? 1 : 0;
                int t = 1 - s;
                bool const_ok = true;
                double maxlim = 0;
                for (long long a = 0; a < c; ++a) {
                    if (std::gcd(a, c) != 1) continue;
                    auto sums = cusp_sum_vector(Q3, 3, 1, t, a, c, sigma);
                    for (const auto& v : sums)
                        if (std::abs(v - sums[0]) > 1e-9) const_ok = false;
                    for (const auto& f : basis)
                        maxlim = std::max(
                            maxlim, std::abs(finite_cusp_limit_from_sums(Q3, f, 3, 1, s, sums)));
                }
                st.checks += 1;
                if (!const_ok || maxlim > 1e-9) ++st.failures;
                w.row({std::to_string(orb.size()), std::to_string(c), const_ok ? "1" : "0",
                       std::to_string(maxlim)});
            }
        }
        // decay contrast on the quaternary form: cuspidal slope vs 1_Sigma
        auto Q4 = QuadFormZ::sum_of_squares(4);
        auto ref = reduced_sphere(Q4, 1, 3, 1);
        auto sigma = sorted_sigma(ref.residues);
        auto basis = basis_complement(sigma);
        std::vector<std::pair<long long, double>> cusp_ladder, eis_ladder;
        for (long long m = 1; m <= 4000; m += 3) {
            auto pts = Q4.lattice_points(m, cfg.budget);
            if (pts.empty()) continue;
            auto counts = residue_counts(pts, 3, 1);
            double worst = 0;
            for (const auto& f : basis)
                worst = std::max(worst, std::abs(theta_coefficient_from_counts(f, counts)));
            cusp_ladder.push_back({m, worst});
            eis_ladder.push_back({m, (double)pts.size()});
        }
        auto s_cusp = decay_estimate(cusp_ladder);
        auto s_eis = decay_estimate(eis_ladder);
        decay.row({"cuspidal_max", s_cusp ? std::to_string(*s_cusp) : "insufficient",
                   std::to_string(4.0 / 4.0 - 0.5)});
        decay.row({"eisenstein", s_eis ? std::to_string(*s_eis) : "insufficient",
                   std::to_string(4.0 / 2.0 - 1.0)});
        ++st.checks;
    } catch (const budget_error& e) {
        st.budget_exceeded = true;
        std::cerr << "theta: " << e.what() << "\n";
    }
    return st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"padiclab: verification suites for supersingular CM arithmetic"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a verification suite");
    std::string suite;
    run->add_option("suite", suite,
                    "one of: spheres theta ssgraph quaternion cm genus katz all")
        ->required();
    std::string config_path, plist, out, format, form_path;
    long long dmax = -1, fmax = -1, budget = -1, cap = -1;
    int res = -1, jobs = -1;
    long long seed = -1;
    run->add_option("--config", config_path, "key=value config file");
    run->add_option("--p", plist, "comma list of primes (a..b ranges allowed)");
    run->add_option("--dmax", dmax, "discriminant cap");
    run->add_option("--fmax", fmax, "conductor cap");
    run->add_option("--res", res, "residue resolution r");
    run->add_option("--out", out, "output directory");
    run->add_option("--format", format, "tsv or json");
    run->add_option("--seed", seed, "sampling seed");
    run->add_option("--budget", budget, "enumeration budget");
    run->add_option("--cap", cap, "class polynomial discriminant cap");
    run->add_option("--jobs", jobs, "parallel jobs for ladders");
    run->add_option("--form", form_path,
                    "quadratic form file for the spheres suite (line 1: n, then the Gram matrix)");

    CLI11_PARSE(app, argc, argv);

    const std::set<std::string> known{"spheres", "theta",  "ssgraph", "quaternion",
                                      "cm",      "genus",  "katz",    "all"};
    if (!known.count(suite)) {
        std::cerr << "config error: unknown suite '" << suite << "'\n";
        return 2;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg.load_file(config_path);
        if (!plist.empty()) cfg.apply("p", plist);
        if (dmax >= 0) cfg.apply("dmax", std::to_string(dmax));
        if (fmax >= 0) cfg.apply("fmax", std::to_string(fmax));
        if (res >= 0) cfg.apply("res", std::to_string(res));
        if (!out.empty()) cfg.apply("out", out);
        if (!format.empty()) cfg.apply("format", format);
        if (seed >= 0) cfg.apply("seed", std::to_string(seed));
        if (budget >= 0) cfg.apply("budget", std::to_string(budget));
        if (cap >= 0) cfg.apply("cap", std::to_string(cap));
        if (jobs >= 0) cfg.apply("jobs", std::to_string(jobs));
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    SuiteStatus st;
    try {
        if (suite == "ssgraph" || suite == "all") st.merge(run_ssgraph(cfg));
        if (suite == "quaternion" || suite == "all") st.merge(run_quaternion(cfg));
        if (suite == "cm" || suite == "all") st.merge(run_cm(cfg));
        if (suite == "genus" || suite == "all") st.merge(run_genus(cfg));
        if (suite == "katz" || suite == "all") st.merge(run_katz(cfg));
        if (suite == "spheres" || suite == "all") st.merge(run_spheres(cfg, form_path));
        if (suite == "theta" || suite == "all") st.merge(run_theta(cfg));
    } catch (const identity_error& e) {
        std::cerr << "identity failure: " << e.what() << "\n";
        return 1;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    }

    std::cout << "suite=" << suite << " checks=" << st.checks
              << " failures=" << st.failures
              << (st.budget_exceeded ? " budget_exceeded" : "") << "\n";
    if (st.failures > 0) return 1;
    if (st.budget_exceeded) return 3;
    return 0;
}
