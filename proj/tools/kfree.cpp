// kfree: command-line front end for the kfree library.
//
// Exit codes: 0 ok, 1 negative verdict, 2 usage/configuration/domain
// error, 3 resource or arithmetic failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kfree/kfree.hpp"

namespace {

using namespace kfree;
using kfree::io::json;

struct SpecFlags {
    std::string set = "visible";
    int d = 2;
    int k = 2;
    std::string ring;
    std::string B;
};

struct Options {
    SpecFlags spec;
    i64 radius = 0;
    std::string format;
    std::string out;
    unsigned threads = 0;
    std::string P, Q, U;
    std::string mode = "scan";
    i64 entry_bound = 2;
    std::string matrix;
    std::string radii = "250,500,1000,2000";
    std::vector<std::string> inputs;
    bool real_embedding = false;
    double unit = 10.0;
};

std::vector<i64> parse_int_list(const std::string& text, const char* what) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) throw ConfigError(std::string("empty entry in ") + what);
        std::size_t used = 0;
        i64 v = 0;
        try {
            v = std::stoll(item.substr(first), &used);
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad integer in ") + what + ": '" + item + "'");
        }
        if (item.find_first_not_of(" \t", first + used) != std::string::npos)
            throw ConfigError(std::string("bad integer in ") + what + ": '" + item + "'");
        out.push_back(v);
    }
    return out;
}

/// "(0,0),(1,1)" -> points of dimension d; the empty string is the empty set.
std::vector<Point> parse_points(const std::string& text, int d, const char* what) {
    std::vector<Point> pts;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == ',' || c == '\t') {
            ++i;
            continue;
        }
        if (c != '(') throw ConfigError(std::string("expected '(' in ") + what);
        const std::size_t close = text.find(')', i);
        if (close == std::string::npos) throw ConfigError(std::string("unbalanced parentheses in ") + what);
        const std::vector<i64> coords = parse_int_list(text.substr(i + 1, close - i - 1), what);
        if (static_cast<int>(coords.size()) != d)
            throw ConfigError(std::string("point of wrong dimension in ") + what);
        Point p{};
        for (int j = 0; j < d; ++j) p[j] = coords[static_cast<std::size_t>(j)];
        pts.push_back(p);
        i = close + 1;
    }
    return pts;
}

UniMat parse_matrix(const std::string& text) {
    const std::vector<i64> e = parse_int_list(text, "--matrix");
    if (e.size() != 4) throw ConfigError("--matrix needs four comma-separated entries a,b,c,d");
    try {
        return UniMat::of(e[0], e[1], e[2], e[3]);
    } catch (const DomainError& err) {
        throw ConfigError(err.what());
    }
}

VSpec build_spec(const SpecFlags& f) {
    if (f.set == "visible") return VSpec::visible(f.d);
    if (f.set == "kfree") {
        if (!f.ring.empty()) return VSpec::kfree_ring(parse_ring_id(f.ring), f.k);
        return VSpec::kfree_lattice(f.d, f.k);
    }
    if (f.set == "bfree") {
        if (f.B.empty()) throw ConfigError("--set bfree needs --B");
        return VSpec::bfree_lattice(f.d, parse_int_list(f.B, "--B"));
    }
    throw ConfigError("unknown --set '" + f.set + "' (visible, kfree, bfree)");
}

unsigned thread_count(const Options& o) { return o.threads > 0 ? o.threads : default_threads(); }

void emit(const Options& o, const std::string& payload) {
    if (o.out.empty() || o.out == "-") {
        std::cout << payload;
        std::cout.flush();
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + o.out);
    f << payload;
}

void emit_json(const Options& o, const json& j) { emit(o, j.dump() + "\n"); }

PointSet load_point_set(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);
    char magic[4] = {};
    f.read(magic, 4);
    f.clear();
    f.seekg(0);
    if (std::string(magic, 4) == "KFPS") return io::read_binary(f);
    try {
        return io::pointset_from_json(json::parse(f));
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void add_spec_flags(CLI::App* cmd, SpecFlags& s) {
    cmd->add_option("--set", s.set, "visible | kfree | bfree")->capture_default_str();
    cmd->add_option("--d", s.d, "dimension (lattice sets)")->capture_default_str();
    cmd->add_option("--k", s.k, "power k for k-free sets")->capture_default_str();
    cmd->add_option("--ring", s.ring, "gauss | eisenstein | sqrt2 | golden | sqrt3 | rational");
    cmd->add_option("--B", s.B, "comma-separated moduli for --set bfree");
}

int cmd_sieve(const Options& o) {
    const VSpec spec = build_spec(o.spec);
    if (o.radius < 1) throw ConfigError("--radius must be at least 1");
    const PointSet ps = sieve(spec, Box{spec.d, o.radius}, thread_count(o));
    const std::string fmt = o.format.empty() ? "json" : o.format;
    if (fmt == "json") {
        emit_json(o, io::pointset_json(ps));
    } else if (fmt == "bin") {
        std::ostringstream os(std::ios::binary);
        io::write_binary(os, ps);
        emit(o, os.str());
    } else if (fmt == "csv") {
        std::string out;
        for (const Point& p : ps.points) {
            for (int i = 0; i < spec.d; ++i) out += (i ? "," : "") + std::to_string(p[i]);
            out += "\n";
        }
        emit(o, out);
    } else {
        throw ConfigError("--format for sieve must be json, bin or csv");
    }
    return 0;
}

int cmd_render(const Options& o) {
    if (o.inputs.empty() || o.inputs.size() > 2) throw ConfigError("render takes one or two point-set files");
    const PointSet first = load_point_set(o.inputs[0]);
    std::optional<PointSet> second;
    if (o.inputs.size() == 2) second = load_point_set(o.inputs[1]);
    RenderOptions ro;
    ro.unit = o.unit;
    ro.real_embedding = o.real_embedding;
    const std::string fmt = o.format.empty() ? "svg" : o.format;
    if (fmt == "svg") emit(o, render_svg(first, second, ro));
    else if (fmt == "ppm") emit(o, render_ppm(first, second, ro));
    else throw ConfigError("--format for render must be svg or ppm");
    return 0;
}

int cmd_admissible(const Options& o) {
    const VSpec spec = build_spec(o.spec);
    const std::vector<Point> U = parse_points(o.U, spec.d, "--U");
    const AdmissibilityResult r = is_admissible(U, spec);
    emit_json(o, io::admissibility_json(spec, U, r));
    return r.admissible ? 0 : 1;
}

int cmd_locate(const Options& o) {
    LocatorQuery q;
    q.spec = build_spec(o.spec);
    q.P = parse_points(o.P, q.spec.d, "--P");
    q.Q = parse_points(o.Q, q.spec.d, "--Q");
    if (o.mode == "scan") q.mode = LocatorMode::scan;
    else if (o.mode == "crt") q.mode = LocatorMode::crt;
    else throw ConfigError("--mode must be scan or crt");
    q.radius = o.radius > 0 ? o.radius : 500;
    const LocatorResult r = find_locator(q);
    emit_json(o, io::locator_json(q, r));
    return r.status == LocatorStatus::found ? 0 : 1;
}

int cmd_stab(const Options& o) {
    const VSpec spec = build_spec(o.spec);
    const i64 r = o.radius > 0 ? o.radius : 64;
    if (!o.matrix.empty()) {
        const UniMat M = parse_matrix(o.matrix);
        const Window w = sieve_window(spec, Box{spec.d, required_radius(r, M.entry_bound())}, thread_count(o));
        const StabVerdict v = stab_test(M, w, r);
        json j;
        j["schema"] = "stabtest/1";
        j["spec"] = io::spec_json(spec);
        j["matrix"] = io::matrix_json(M);
        j["radius"] = r;
        j["pass"] = v.pass;
        j["counterexample"] = v.counterexample ? io::point_json(*v.counterexample, 2) : json(nullptr);
        emit_json(o, j);
        return v.pass ? 0 : 1;
    }
    const StabReport rep = stab_search(spec, o.entry_bound, r, thread_count(o));
    emit_json(o, io::stabreport_json(rep));
    return rep.match == GroupMatch::exact ? 0 : 1;
}

int cmd_witness(const Options& o) {
    if (o.spec.ring.empty()) throw ConfigError("witness needs --ring");
    const Witness w = inadmissible_image_witness(parse_matrix(o.matrix), parse_ring_id(o.spec.ring), o.spec.k);
    emit_json(o, io::witness_json(w));
    return 0;
}

int cmd_density(const Options& o) {
    const VSpec spec = build_spec(o.spec);
    const DensityReport rep = density_report(spec, parse_int_list(o.radii, "--radii"), thread_count(o));
    const std::string fmt = o.format.empty() ? "json" : o.format;
    if (fmt == "json") emit_json(o, io::density_json(rep));
    else if (fmt == "csv") emit(o, to_csv(rep));
    else throw ConfigError("--format for density must be json or csv");
    return 0;
}

int cmd_entropy(const Options& o) {
    const VSpec spec = build_spec(o.spec);
    emit_json(o, io::entropy_json(spec, entropy(spec)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-free point sets: sieving, admissibility, locators, symmetry search and densities"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--threads", o.threads, "worker threads (default: KFREE_THREADS or 1)");

    auto* sieve_cmd = app.add_subcommand("sieve", "sieve a window of V and write the point set");
    add_spec_flags(sieve_cmd, o.spec);
    sieve_cmd->add_option("--radius", o.radius, "box half-width R")->required();
    sieve_cmd->add_option("--format", o.format, "json | bin | csv");
    sieve_cmd->add_option("--out", o.out, "output file (default stdout)");

    auto* render_cmd = app.add_subcommand("render", "render one or two point sets");
    render_cmd->add_option("inputs", o.inputs, "point-set files (JSON or binary)")->required();
    render_cmd->add_option("--format", o.format, "svg | ppm");
    render_cmd->add_option("--out", o.out, "output file (default stdout)");
    render_cmd->add_option("--unit", o.unit, "pixels per lattice unit")->capture_default_str();
    render_cmd->add_flag("--real-embedding", o.real_embedding, "triangular geometry for Eisenstein sets");

    auto* adm_cmd = app.add_subcommand("admissible", "check admissibility of a finite set");
    add_spec_flags(adm_cmd, o.spec);
    adm_cmd->add_option("--U", o.U, "points, e.g. \"(0,0),(1,1)\"");
    adm_cmd->add_option("--out", o.out, "output file (default stdout)");

    auto* loc_cmd = app.add_subcommand("locate", "find t with t+P inside V and t+Q outside V");
    add_spec_flags(loc_cmd, o.spec);
    loc_cmd->add_option("--P", o.P, "points required inside V");
    loc_cmd->add_option("--Q", o.Q, "points required outside V");
    loc_cmd->add_option("--mode", o.mode, "scan | crt")->capture_default_str();
    loc_cmd->add_option("--radius", o.radius, "search radius (default 500)");
    loc_cmd->add_option("--out", o.out, "output file (default stdout)");

    auto* stab_cmd = app.add_subcommand("stab", "search GL(2,Z) for stabilising matrices");
    add_spec_flags(stab_cmd, o.spec);
    stab_cmd->add_option("--entry-bound", o.entry_bound, "largest |entry|")->capture_default_str();
    stab_cmd->add_option("--radius", o.radius, "test radius r (default 64)");
    stab_cmd->add_option("--matrix", o.matrix, "test a single matrix a,b,c,d");
    stab_cmd->add_option("--out", o.out, "output file (default stdout)");

    auto* wit_cmd = app.add_subcommand("witness", "admissible S whose image under A is inadmissible");
    wit_cmd->add_option("--ring", o.spec.ring, "quadratic ring")->required();
    wit_cmd->add_option("--k", o.spec.k, "power k")->capture_default_str();
    wit_cmd->add_option("--matrix", o.matrix, "matrix a,b,c,d")->required();
    wit_cmd->add_option("--out", o.out, "output file (default stdout)");

    auto* dens_cmd = app.add_subcommand("density", "empirical versus theoretical density");
    add_spec_flags(dens_cmd, o.spec);
    dens_cmd->add_option("--radii", o.radii, "comma-separated radii")->capture_default_str();
    dens_cmd->add_option("--format", o.format, "json | csv");
    dens_cmd->add_option("--out", o.out, "output file (default stdout)");

    auto* ent_cmd = app.add_subcommand("entropy", "topological entropy density * log 2");
    add_spec_flags(ent_cmd, o.spec);
    ent_cmd->add_option("--out", o.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "kfree: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*sieve_cmd) return cmd_sieve(o);
        if (*render_cmd) return cmd_render(o);
        if (*adm_cmd) return cmd_admissible(o);
        if (*loc_cmd) return cmd_locate(o);
        if (*stab_cmd) return cmd_stab(o);
        if (*wit_cmd) return cmd_witness(o);
        if (*dens_cmd) return cmd_density(o);
        if (*ent_cmd) return cmd_entropy(o);
    } catch (const ConfigError& e) {
        std::cerr << "kfree: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "kfree: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "kfree: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kfree: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
