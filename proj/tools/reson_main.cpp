// SPDX-License-Identifier: Apache-2.0
//
// Command-line front-end: material reports, dispersion maps, refinement
// plans, eigensolves, convergence studies and spectral-window sweeps.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "reson/dispersion.hpp"
#include "reson/fem1d.hpp"
#include "reson/fem_radial.hpp"
#include "reson/io.hpp"
#include "reson/materials.hpp"
#include "reson/nleigs.hpp"
#include "reson/oracles.hpp"
#include "reson/refine.hpp"
#include "reson/study.hpp"

namespace
{

using namespace reson;
using nlohmann::json;

struct GlobalOptions
{
    std::string config;
    std::string out_dir = "out";
    int jobs = 1;
    unsigned seed = 1234;
};

Cplx parse_complex_pair(const std::string &s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        return Cplx(std::stod(s), 0.0);
    return Cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

void parallel_for(int jobs, int n_tasks, const std::function<void(int)> &task)
{
    if (jobs <= 1 || n_tasks <= 1)
    {
        for (int i = 0; i < n_tasks; ++i)
            task(i);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex m;
    int next = 0;
    for (int t = 0; t < std::min(jobs, n_tasks); ++t)
        pool.emplace_back([&]
                          {
            while (true)
            {
                int i;
                {
                    std::lock_guard<std::mutex> lock(m);
                    if (next >= n_tasks)
                        return;
                    i = next++;
                }
                task(i);
            } });
    for (auto &th : pool)
        th.join();
}

io::SolverConfig solver_config(const GlobalOptions &global)
{
    io::SolverConfig cfg;
    if (!global.config.empty())
        cfg = io::load_solver_config(global.config);
    cfg.seed = global.seed;
    return cfg;
}

std::string config_text(const GlobalOptions &global)
{
    if (global.config.empty())
        return "{}";
    std::ifstream in(global.config);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_material(const GlobalOptions &global, const std::string &name, double lo, double hi,
                 int samples)
{
    const auto table = materials::MaterialTable::builtin();
    if (!table.has(name))
    {
        std::cerr << "unknown material: " << name << "\n";
        return 2;
    }
    const auto &model = table.get(name);
    std::ostringstream csv;
    csv << "omega,eps_re,eps_im,n_re,n_im\n";
    for (int i = 0; i < samples; ++i)
    {
        const double w = lo + (hi - lo) * i / std::max(1, samples - 1);
        const Cplx eps = model.eval(Cplx(w, 0.0));
        const Cplx n = model.refractive_index(Cplx(w, 0.0));
        csv << io::format_full(w) << "," << io::format_full(eps.real()) << ","
            << io::format_full(eps.imag()) << "," << io::format_full(n.real()) << ","
            << io::format_full(n.imag()) << "\n";
    }
    io::write_text_atomic(global.out_dir + "/material_" + name + ".csv", csv.str());

    json doc;
    doc["name"] = name;
    auto put_list = [&](const char *key, const std::vector<Cplx> &zs)
    {
        doc[key] = json::array();
        for (const Cplx &z : zs)
            doc[key].push_back({z.real(), z.imag()});
    };
    put_list("poles", model.all_poles());
    put_list("zeros", model.is_constant() ? std::vector<Cplx>{} : model.all_zeros());
    put_list("branch_points_eps_-1", model.branch_points(-1.0));
    put_list("branch_points_eps_-2", model.branch_points(-2.0));
    io::write_text_atomic(global.out_dir + "/material_" + name + ".json", doc.dump(2));
    std::cout << "material " << name << ": " << samples << " samples over [" << lo << ", " << hi
              << "] written to " << global.out_dir << "\n";
    return 0;
}

int cmd_dispersion(const GlobalOptions &global, const std::string &omega_s, double h, int p_lo,
                   int p_hi)
{
    const Cplx omega = parse_complex_pair(omega_s);
    std::ostringstream csv;
    csv << "re_omega,im_omega,h,p,re_Ep,im_Ep,regime\n";
    for (int p = p_lo; p <= p_hi; ++p)
    {
        const dispersion::DispersionPoint point{omega, h, p};
        Cplx ep(0.0);
        std::string regime = "pole";
        try
        {
            ep = dispersion::dispersive_error(point);
            regime = dispersion::regime_name(dispersion::classify_regime(point).regime);
        }
        catch (const FormulaPole &)
        {
        }
        csv << io::format_full(omega.real()) << "," << io::format_full(omega.imag()) << ","
            << io::format_full(h) << "," << p << "," << io::format_full(ep.real()) << ","
            << io::format_full(ep.imag()) << "," << regime << "\n";
    }
    io::write_text_atomic(global.out_dir + "/dispersion.csv", csv.str());
    std::cout << "dispersion map for omega = " << omega << ", h = " << h << ", p = " << p_lo
              << ".." << p_hi << " written\n";
    return 0;
}

int cmd_refine_plan(const GlobalOptions &global, const std::string &scene_path,
                    const std::string &mode_s, int p0)
{
    const auto table = materials::MaterialTable::builtin();
    const io::SolverConfig cfg = solver_config(global);
    const io::Scene1D scene = io::load_scene_1d(scene_path);
    const refine::SpectralRegion region{cfg.shift, cfg.radius};
    const auto mode = (mode_s == "sh") ? refine::StrategyMode::HStrategy
                                       : refine::StrategyMode::PStrategy;
    const refine::RefineOutcome outcome = refine::apriori_refine(scene.mesh, table, region, p0, mode);
    io::write_text_atomic(global.out_dir + "/plan.json", io::plan_to_json(outcome.plan));
    std::cout << "plan: " << outcome.plan.cells.size() << " cells, gamma0 = "
              << outcome.plan.gamma0 << "\n";
    return 0;
}

int solve_1d(const GlobalOptions &global, const io::Scene1D &scene, const io::SolverConfig &cfg,
             const std::string &mode_s, int p0)
{
    const auto table = materials::MaterialTable::builtin();
    mesh::Mesh1D mesh = scene.mesh;
    refine::RefinementPlan plan;
    if (mode_s == "sh" || mode_s == "hp")
    {
        const refine::SpectralRegion region{cfg.shift, cfg.radius};
        const auto mode = (mode_s == "sh") ? refine::StrategyMode::HStrategy
                                           : refine::StrategyMode::PStrategy;
        auto outcome = refine::apriori_refine(mesh, table, region, p0, mode);
        mesh = std::move(outcome.mesh);
        plan = std::move(outcome.plan);
        io::write_text_atomic(global.out_dir + "/plan.json", io::plan_to_json(plan));
    }
    else if (mode_s == "classical_p" || mode_s == "classical_h")
    {
        mesh.set_uniform_degree(p0);
    }
    const auto system = fem1d::assemble_1d(mesh);
    const auto problem = fem1d::build_nep_1d(system, table, scene.polarization);
    nleigs::SolverOptions opt;
    opt.nev = cfg.nev;
    opt.tol = cfg.tol;
    opt.max_restarts = cfg.max_restarts;
    opt.degree = cfg.degree;
    opt.seed = cfg.seed;
    nleigs::NleigsSolver solver(problem, ComplexDisk{cfg.shift, cfg.radius}, opt);
    const auto report = solver.solve(cfg.shift);
    io::write_text_atomic(global.out_dir + "/pairs.json",
                          io::pairs_to_json(report.pairs, report.all_converged));
    std::cout << report.pairs.size() << " pairs written (dofs " << system.dim << ", "
              << (report.all_converged ? "converged" : "NOT fully converged") << ")\n";
    return report.all_converged ? 0 : 1;
}

int solve_radial(const GlobalOptions &global, const io::RadialSceneFile &file,
                 const io::SolverConfig &cfg, int p0)
{
    const auto table = materials::MaterialTable::builtin();
    json doc;
    doc["schema"] = "reson.radial_pairs.v1";
    doc["modes"] = json::array();
    bool all_ok = true;
    std::mutex doc_mutex;
    std::vector<int> modes;
    for (int m = file.m_lo; m <= file.m_hi; ++m)
        modes.push_back(m);
    parallel_for(global.jobs, static_cast<int>(modes.size()), [&](int idx)
                 {
        fem_radial::RadialScene scene = file.scene;
        scene.angular_mode = modes[idx];
        const auto mesh = fem_radial::radial_mesh(scene, p0, 3);
        const auto system = fem_radial::assemble_radial(scene, mesh);
        const auto problem = fem_radial::build_nep_radial(system, table, scene.polarization);
        nleigs::SolverOptions opt;
        opt.nev = cfg.nev;
        opt.tol = cfg.tol;
        opt.max_restarts = cfg.max_restarts;
        opt.degree = cfg.degree;
        opt.seed = cfg.seed;
        nleigs::NleigsSolver solver(problem, ComplexDisk{cfg.shift, cfg.radius}, opt);
        const auto report = solver.solve(cfg.shift);
        json mode;
        mode["m"] = modes[idx];
        mode["all_converged"] = report.all_converged;
        mode["pairs"] = json::parse(io::pairs_to_json(report.pairs, report.all_converged))["pairs"];
        std::lock_guard<std::mutex> lock(doc_mutex);
        doc["modes"].push_back(mode);
        all_ok = all_ok && report.all_converged; });
    io::write_text_atomic(global.out_dir + "/pairs.json", doc.dump(2));
    std::cout << "radial solve: modes " << file.m_lo << ".." << file.m_hi << " written\n";
    return all_ok ? 0 : 1;
}

int cmd_solve(const GlobalOptions &global, const std::string &scene_path,
              const std::string &mode_s, int p0)
{
    const io::SolverConfig cfg = solver_config(global);
    if (io::is_radial_scene(scene_path))
        return solve_radial(global, io::load_scene_radial(scene_path), cfg, p0);
    return solve_1d(global, io::load_scene_1d(scene_path), cfg, mode_s, p0);
}

int cmd_convergence(const GlobalOptions &global, const std::string &problem_name, double n1,
                    const std::string &mode_s, int p_fixed, int rungs, int p_max)
{
    const auto table = materials::MaterialTable::builtin();
    study::StudyConfig config;
    config.rungs = rungs;
    config.p_fixed = p_fixed;
    config.p_max = p_max;
    Polarization pol = Polarization::TM;

    mesh::Mesh1D base({0.0, 1.0}, {"vacuum"}, {1}, mesh::BoundaryKind::Dirichlet,
                      mesh::BoundaryKind::DtN);
    if (problem_name == "slab")
    {
        // eigenvalue nearest Re omega = 10
        const int m_index = static_cast<int>(std::floor((10.0 * 2.0 * n1 * 0.5 / kPi - 1.0) / 2.0));
        const auto mode = oracles::slab_exact(n1, 0.5, m_index, pol);
        config.reference = mode.omega;
        config.shift = mode.omega + Cplx(0.03, -0.01);
        config.radius = 1.2;
        config.exact = [n1, mode](double x, Cplx *du)
        { return oracles::slab_eigenfunction(n1, 0.5, mode, x, Polarization::TM, du); };
        std::ostringstream name;
        name << "slab_n" << n1;
        base = mesh::Mesh1D({0.0, 0.5, 1.0}, {"slab", "vacuum"}, {1, 1},
                            mesh::BoundaryKind::Dirichlet, mesh::BoundaryKind::DtN);
    }
    else if (problem_name == "multislab")
    {
        const auto profile = oracles::multislab_profile(pol);
        const auto ref = oracles::newton_root(
            [&](Cplx w) { return oracles::transfer_determinant(profile, w); },
            Cplx(10.1, -0.065));
        config.reference = ref.omega;
        config.shift = Cplx(10.1, -0.06);
        config.radius = 1.0;
        base = mesh::Mesh1D({0.0, 0.25, 0.5, 0.75, 1.0}, {"vacuum", "n10", "n2", "n5"},
                            {1, 1, 1, 1}, mesh::BoundaryKind::Dirichlet, mesh::BoundaryKind::DtN);
    }
    else
    {
        throw OracleMissing("no reference oracle for scene: " + problem_name);
    }

    materials::MaterialTable local = table;
    if (problem_name == "slab")
        local.add("slab", materials::PermittivityModel::constant(n1 * n1));
    else
    {
        local.add("n10", materials::PermittivityModel::constant(100.0));
        local.add("n2", materials::PermittivityModel::constant(4.0));
        local.add("n5", materials::PermittivityModel::constant(25.0));
    }

    const auto records = study::run_ladder(base, local, pol, study::ladder_mode_from_string(mode_s),
                                           config);
    std::ostringstream csv;
    csv << "dofs,re_omega,im_omega,eig_error,l2_error,h1_error,wall_seconds\n";
    for (const auto &r : records)
        csv << r.dofs << "," << io::format_full(r.omega_fem.real()) << ","
            << io::format_full(r.omega_fem.imag()) << "," << io::format_full(r.eigenvalue_error)
            << "," << io::format_full(r.l2_error) << "," << io::format_full(r.h1_error) << ","
            << io::format_full(r.wall_seconds) << "\n";
    io::write_text_atomic(global.out_dir + "/convergence_" + problem_name + "_" + mode_s + ".csv",
                          csv.str());
    std::cout << "convergence ladder (" << records.size() << " rungs) written\n";
    return 0;
}

int cmd_sweep(const GlobalOptions &global, const std::string &scene_path, double re_lo,
              double re_hi, double im_lo, double im_hi, int nx, int p0)
{
    const auto table = materials::MaterialTable::builtin();
    const io::SolverConfig base_cfg = solver_config(global);
    if (!io::is_radial_scene(scene_path))
    {
        std::cerr << "sweep expects a radial scene\n";
        return 2;
    }
    const io::RadialSceneFile file = io::load_scene_radial(scene_path);

    // tile the window with shifts, avoiding the singularity set by 1e-3
    std::vector<Cplx> all_sing;
    for (const auto &mat : file.scene.materials)
    {
        const auto &model = table.get(mat);
        for (const Cplx &s : model.all_poles())
            all_sing.push_back(s);
        if (!model.is_constant())
            for (const Cplx &s : model.all_zeros())
                all_sing.push_back(s);
    }
    const double dx = (re_hi - re_lo) / nx;
    const double radius = 0.75 * dx;
    std::vector<Cplx> shifts;
    const int ny = std::max(1, static_cast<int>(std::ceil((im_hi - im_lo) / dx)));
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < ny; ++k)
        {
            Cplx mu(re_lo + dx * (i + 0.5), im_lo + (im_hi - im_lo) * (k + 0.5) / ny);
            bool clear = true;
            for (const Cplx &s : all_sing)
                if (std::abs(mu - s) < 1e-3)
                    clear = false;
            for (int bump = 0; !clear && bump < 8; ++bump)
            {
                mu += Cplx(2e-3, 1e-3);
                clear = true;
                for (const Cplx &s : all_sing)
                    if (std::abs(mu - s) < 1e-3)
                        clear = false;
            }
            if (clear)
                shifts.push_back(mu);
        }

    struct Hit
    {
        Cplx omega;
        double residual;
        int m;
    };
    std::vector<Hit> hits;
    std::mutex hits_mutex;
    std::vector<std::pair<int, Cplx>> tasks;
    for (int m = file.m_lo; m <= file.m_hi; ++m)
        for (const Cplx &mu : shifts)
            tasks.push_back({m, mu});
    parallel_for(global.jobs, static_cast<int>(tasks.size()), [&](int idx)
                 {
        fem_radial::RadialScene scene = file.scene;
        scene.angular_mode = tasks[idx].first;
        const auto mesh = fem_radial::radial_mesh(scene, p0, 3);
        const auto system = fem_radial::assemble_radial(scene, mesh);
        const auto problem = fem_radial::build_nep_radial(system, table, scene.polarization);
        nleigs::SolverOptions opt;
        opt.nev = base_cfg.nev;
        opt.tol = base_cfg.tol;
        opt.max_restarts = base_cfg.max_restarts;
        opt.seed = base_cfg.seed;
        try
        {
            nleigs::NleigsSolver solver(problem, ComplexDisk{tasks[idx].second, radius}, opt);
            const auto report = solver.solve(tasks[idx].second);
            std::lock_guard<std::mutex> lock(hits_mutex);
            for (const auto &p : report.pairs)
                hits.push_back({p.omega, p.residual, tasks[idx].first});
        }
        catch (const Error &)
        {
            // shift too close to the singular set or factorization failure
        } });

    // idempotent merge at distance 1e-7
    std::vector<io::WeightedPoint> raw;
    for (const auto &h : hits)
        raw.push_back({h.omega, h.residual, h.m});
    std::vector<io::WeightedPoint> merged_pts = io::merge_points(raw, 1e-7);
    std::vector<Hit> merged;
    for (const auto &p : merged_pts)
        merged.push_back({p.z, p.weight, p.tag});
    std::sort(merged.begin(), merged.end(), [](const Hit &a, const Hit &b)
              { return a.omega.real() < b.omega.real(); });

    std::ostringstream csv;
    csv << "m,re_omega,im_omega,residual\n";
    for (const auto &h : merged)
        csv << h.m << "," << io::format_full(h.omega.real()) << ","
            << io::format_full(h.omega.imag()) << "," << io::format_full(h.residual) << "\n";
    io::write_text_atomic(global.out_dir + "/sweep.csv", csv.str());

    json doc;
    doc["schema"] = "reson.sweep.v1";
    doc["annotations"] = json::array();
    for (const auto &mat : file.scene.materials)
    {
        const auto &model = table.get(mat);
        if (model.is_constant())
            continue;
        json ann;
        ann["material"] = mat;
        auto put = [&](const char *key, const std::vector<Cplx> &zs)
        {
            ann[key] = json::array();
            for (const Cplx &z : zs)
                ann[key].push_back({z.real(), z.imag()});
        };
        put("poles", model.all_poles());
        put("zeros", model.all_zeros());
        put("branch_points_-1", model.branch_points(-1.0));
        put("branch_points_-2", model.branch_points(-2.0));
        doc["annotations"].push_back(ann);
    }
    io::write_text_atomic(global.out_dir + "/sweep.json", doc.dump(2));
    std::cout << "sweep: " << merged.size() << " distinct resonances\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"scattering resonances of dispersive metal-dielectric structures"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--config", global.config, "solver configuration JSON");
    app.add_option("--out", global.out_dir, "output directory");
    app.add_option("--jobs", global.jobs, "worker threads");
    app.add_option("--seed", global.seed, "random seed");

    // material
    std::string mat_name;
    double win_lo = materials::kValidityLo, win_hi = materials::kValidityHi;
    int mat_samples = 121;
    auto *material = app.add_subcommand("material", "permittivity report");
    material->add_option("name", mat_name)->required();
    material->add_option("--window", [&win_lo, &win_hi](const std::vector<std::string> &v)
                         {
        if (v.size() != 2)
            return false;
        win_lo = std::stod(v[0]);
        win_hi = std::stod(v[1]);
        return true; },
                         "window lo hi")
        ->expected(2);
    material->add_option("--samples", mat_samples);

    // dispersion
    std::string disp_omega = "20,-0.5";
    double disp_h = 2.0;
    std::string disp_p = "1:40";
    auto *disp = app.add_subcommand("dispersion", "dispersive error map");
    disp->add_option("--omega", disp_omega, "complex frequency re,im");
    disp->add_option("--h", disp_h);
    disp->add_option("--p", disp_p, "degree range lo:hi");

    // refine-plan
    std::string plan_scene, plan_mode = "hp";
    int plan_p0 = 10;
    auto *plan = app.add_subcommand("refine-plan", "a-priori refinement plan");
    plan->add_option("--scene", plan_scene)->required();
    plan->add_option("--mode", plan_mode)->check(CLI::IsMember({"sh", "hp"}));
    plan->add_option("--p0", plan_p0);

    // solve
    std::string solve_scene, solve_mode = "hp";
    int solve_p0 = 10;
    auto *solve = app.add_subcommand("solve", "assemble and run the eigensolver");
    solve->add_option("--scene", solve_scene)->required();
    solve->add_option("--mode", solve_mode)
        ->check(CLI::IsMember({"classical_h", "classical_p", "sh", "hp"}));
    solve->add_option("--p0", solve_p0);

    // convergence
    std::string conv_problem = "slab", conv_mode = "classical_h";
    double conv_n1 = 2.0;
    int conv_p = 1, conv_rungs = 7, conv_pmax = 12;
    auto *conv = app.add_subcommand("convergence", "error ladders against the oracles");
    conv->add_option("--problem", conv_problem)->check(CLI::IsMember({"slab", "multislab"}));
    conv->add_option("--n1", conv_n1);
    conv->add_option("--mode", conv_mode)
        ->check(CLI::IsMember({"classical_h", "classical_p", "sh", "hp"}));
    conv->add_option("--p", conv_p, "degree for h ladders");
    conv->add_option("--rungs", conv_rungs);
    conv->add_option("--p-max", conv_pmax);

    // sweep
    std::string sweep_scene;
    double sw_re_lo = 1.0, sw_re_hi = 4.0, sw_im_lo = -1.0, sw_im_hi = -0.01;
    int sw_nx = 6, sw_p0 = 12;
    auto *sweep = app.add_subcommand("sweep", "spectral window sweep over shifts");
    sweep->add_option("--scene", sweep_scene)->required();
    sweep->add_option("--re-lo", sw_re_lo);
    sweep->add_option("--re-hi", sw_re_hi);
    sweep->add_option("--im-lo", sw_im_lo);
    sweep->add_option("--im-hi", sw_im_hi);
    sweep->add_option("--nx", sw_nx);
    sweep->add_option("--p0", sw_p0);

    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(global.out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    int rc = 0;
    std::string command;
    try
    {
        if (material->parsed())
        {
            command = "material";
            rc = cmd_material(global, mat_name, win_lo, win_hi, mat_samples);
        }
        else if (disp->parsed())
        {
            command = "dispersion";
            const auto colon = disp_p.find(':');
            const int plo = std::stoi(disp_p.substr(0, colon));
            const int phi = (colon == std::string::npos) ? plo : std::stoi(disp_p.substr(colon + 1));
            rc = cmd_dispersion(global, disp_omega, disp_h, plo, phi);
        }
        else if (plan->parsed())
        {
            command = "refine-plan";
            rc = cmd_refine_plan(global, plan_scene, plan_mode, plan_p0);
        }
        else if (solve->parsed())
        {
            command = "solve";
            rc = cmd_solve(global, solve_scene, solve_mode, solve_p0);
        }
        else if (conv->parsed())
        {
            command = "convergence";
            rc = cmd_convergence(global, conv_problem, conv_n1, conv_mode, conv_p, conv_rungs,
                                 conv_pmax);
        }
        else if (sweep->parsed())
        {
            command = "sweep";
            rc = cmd_sweep(global, sweep_scene, sw_re_lo, sw_re_hi, sw_im_lo, sw_im_hi, sw_nx,
                           sw_p0);
        }
    }
    catch (const UnknownMaterial &e)
    {
        std::cerr << e.what() << "\n";
        return 2;
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_manifest(global.out_dir, command, config_text(global), wall);
    return rc;
}
