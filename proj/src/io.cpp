// SPDX-License-Identifier: Apache-2.0

#include "reson/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reson::io
{

using nlohmann::json;

namespace
{

json parse_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open file: " + path);
    return json::parse(in);
}

Polarization parse_polarization(const json &doc)
{
    const std::string s = doc.value("polarization", "TM");
    if (s == "TM" || s == "tm")
        return Polarization::TM;
    if (s == "TE" || s == "te")
        return Polarization::TE;
    throw Error("polarization must be TM or TE");
}

mesh::BoundaryKind parse_bc(const std::string &s)
{
    if (s == "dirichlet")
        return mesh::BoundaryKind::Dirichlet;
    if (s == "dtn")
        return mesh::BoundaryKind::DtN;
    if (s == "natural")
        return mesh::BoundaryKind::Natural;
    throw Error("boundary kind must be dirichlet, dtn or natural");
}

} // namespace

Scene1D load_scene_1d(const std::string &path)
{
    const json doc = parse_file(path);
    std::vector<double> breaks = doc.at("breakpoints").get<std::vector<double>>();
    std::vector<std::string> mats;
    std::vector<int> degs;
    for (const auto &r : doc.at("regions"))
    {
        mats.push_back(r.at("material").get<std::string>());
        degs.push_back(r.value("p", 1));
    }
    const auto &bc = doc.at("bc");
    Scene1D scene{mesh::Mesh1D(breaks, mats, degs, parse_bc(bc.at("left").get<std::string>()),
                               parse_bc(bc.at("right").get<std::string>())),
                  parse_polarization(doc)};
    return scene;
}

bool is_radial_scene(const std::string &path)
{
    return parse_file(path).contains("radii");
}

RadialSceneFile load_scene_radial(const std::string &path)
{
    const json doc = parse_file(path);
    RadialSceneFile out;
    out.scene.radii = doc.at("radii").get<std::vector<double>>();
    out.scene.materials = doc.at("materials").get<std::vector<std::string>>();
    out.scene.polarization = parse_polarization(doc);
    const auto &pml = doc.at("pml");
    const double outer = out.scene.radii.back();
    out.scene.pml = fem_radial::RadialPmlProfile::standard(outer, pml.value("sigma0", 5.0));
    if (pml.contains("a"))
        out.scene.pml.a = pml.at("a").get<double>();
    if (pml.contains("b"))
        out.scene.pml.b = pml.at("b").get<double>();
    if (pml.contains("ell"))
        out.scene.pml.ell = pml.at("ell").get<double>();
    if (doc.contains("m_range"))
    {
        out.m_lo = doc.at("m_range").at(0).get<int>();
        out.m_hi = doc.at("m_range").at(1).get<int>();
    }
    out.scene.angular_mode = out.m_lo;
    return out;
}

SolverConfig load_solver_config(const std::string &path)
{
    const json doc = parse_file(path);
    SolverConfig cfg;
    if (doc.contains("shift"))
        cfg.shift = Cplx(doc.at("shift").at(0).get<double>(), doc.at("shift").at(1).get<double>());
    cfg.radius = doc.value("radius", 0.5);
    cfg.nev = doc.value("nev", 4);
    cfg.tol = doc.value("tol", 1e-10);
    cfg.max_restarts = doc.value("max_restarts", 30);
    if (doc.contains("degree") && doc.at("degree").is_number_integer())
        cfg.degree = doc.at("degree").get<int>();
    cfg.seed = doc.value("seed", 1234u);
    return cfg;
}

std::string format_full(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_full(Cplx v)
{
    return format_full(v.real()) + (v.imag() < 0.0 ? "" : "+") + format_full(v.imag()) + "i";
}

std::string pairs_to_json(const std::vector<nleigs::ResonancePair> &pairs, bool all_converged)
{
    json doc;
    doc["schema"] = "reson.pairs.v1";
    doc["all_converged"] = all_converged;
    doc["pairs"] = json::array();
    for (const auto &p : pairs)
    {
        json item;
        item["omega"] = {p.omega.real(), p.omega.imag()};
        item["residual"] = p.residual;
        item["converged"] = p.converged;
        item["shift"] = {p.shift.real(), p.shift.imag()};
        doc["pairs"].push_back(item);
    }
    return doc.dump(2);
}

std::string plan_to_json(const refine::RefinementPlan &plan)
{
    json doc;
    doc["schema"] = "reson.plan.v1";
    doc["gamma0"] = plan.gamma0;
    doc["feasible"] = plan.feasible;
    doc["cells"] = json::array();
    for (std::size_t j = 0; j < plan.cells.size(); ++j)
    {
        json c;
        c["cell"] = j;
        c["h"] = plan.cells[j].h;
        c["p"] = plan.cells[j].p;
        c["k"] = plan.cells[j].k;
        doc["cells"].push_back(c);
    }
    return doc.dump(2);
}

void write_text_atomic(const std::string &path, const std::string &content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw Error("cannot write file: " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot rename into place: " + path);
}

std::vector<WeightedPoint> merge_points(const std::vector<WeightedPoint> &points, double tol)
{
    std::vector<WeightedPoint> merged;
    for (const auto &p : points)
    {
        bool dup = false;
        for (auto &m : merged)
            if (m.tag == p.tag && std::abs(m.z - p.z) < tol)
            {
                if (p.weight < m.weight)
                    m = p;
                dup = true;
                break;
            }
        if (!dup)
            merged.push_back(p);
    }
    return merged;
}

void write_manifest(const std::string &out_dir, const std::string &command,
                    const std::string &config_text, double wall_seconds)
{
    // FNV-1a hash of the canonical config text
    unsigned long long h = 1469598103934665603ull;
    for (const char c : config_text)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    json doc;
    doc["schema"] = "reson.manifest.v1";
    doc["command"] = command;
    doc["config_hash"] = h;
    doc["config"] = config_text;
    doc["version"] = "reson 1.0";
    doc["wall_seconds"] = wall_seconds;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    write_text_atomic(out_dir + "/manifest.json", doc.dump(2));
}

} // namespace reson::io
