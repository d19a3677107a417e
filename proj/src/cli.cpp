#include "kdpmac/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdpmac/paper_example.hpp"
#include "kdpmac/provisioning.hpp"
#include "kdpmac/simulator.hpp"
#include "kdpmac/state_files.hpp"
#include "kdpmac/util.hpp"
#include "kdpmac/verifier.hpp"

namespace fs = std::filesystem;

namespace kdpmac::cli {

namespace {

constexpr int kRandomCheckMaxUsers = 64;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << content;
}

Hierarchy load_hierarchy(const std::string& arg) {
    if (arg == "fig1") return parse_hierarchy(paper_example::kFig1HierarchyText);
    return parse_hierarchy(read_file(arg));
}

std::vector<int> resolve_sizes(const std::string& arg, int user_count) {
    if (arg == "paper") {
        auto sizes = paper_example::block_sizes();
        if (static_cast<int>(sizes.size()) != user_count)
            throw ValidationError("sizes preset 'paper' is for 7 users, hierarchy has " +
                                  std::to_string(user_count));
        return sizes;
    }
    if (arg.rfind("uniform:", 0) == 0) {
        int b = std::stoi(arg.substr(8));
        if (b < 1) throw ValidationError("uniform block size must be positive");
        return std::vector<int>(static_cast<std::size_t>(user_count), b);
    }
    std::vector<int> sizes;
    std::istringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            int value = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            sizes.push_back(value);
        } catch (const std::exception&) {
            throw ValidationError("bad block size '" + tok + "'");
        }
    }
    if (static_cast<int>(sizes.size()) != user_count)
        throw ValidationError("got " + std::to_string(sizes.size()) + " sizes for " +
                              std::to_string(user_count) + " users");
    return sizes;
}

struct GenOptions {
    std::string hierarchy;
    std::string sizes = "uniform:2";
    int key_len = 16;
    bool key_len_given = false;
    std::string seed_hex = "00";
    std::string rule = "containment";
    std::string material = "seeded";
    std::string out_dir;
};

int cmd_gen(const GenOptions& opt, std::ostream& out) {
    Hierarchy h = load_hierarchy(opt.hierarchy);
    BlockFamily family = build_block_family(h.user_count(), resolve_sizes(opt.sizes, h.user_count()));
    SSetTable ssets = build_ssets(h, family);
    DeltaRule rule = parse_delta_rule(opt.rule);

    KeyMaterial material;
    KeyMatrix matrix;
    if (opt.material == "paper") {
        if (opt.key_len_given && opt.key_len != 1)
            throw ValidationError("the bundled one-byte material requires --key-len 1");
        material = paper_example::material();
        if (material.size() != ssets.ground_size)
            throw ValidationError("the bundled material has 15 elements; this family needs " +
                                  std::to_string(ssets.ground_size));
        matrix = build_key_matrix(material, ssets, rule);
        if (!zero_key_collisions(matrix, ssets, rule).empty())
            throw KeyGenError("bundled material folds to zero on an allowed channel");
    } else if (opt.material == "seeded") {
        ScreenedKeys keys = derive_keys_screened(ssets, opt.key_len, from_hex(opt.seed_hex), rule);
        material = std::move(keys.material);
        matrix = std::move(keys.matrix);
    } else {
        throw ValidationError("--material must be seeded or paper");
    }

    std::vector<UserBundle> bundles = make_bundles(h, family, ssets, material, matrix);

    fs::create_directories(opt.out_dir);
    {
        std::ostringstream s;
        write_ssets(ssets, s);
        write_file(fs::path(opt.out_dir) / "ssets.txt", s.str());
    }
    {
        std::ostringstream s;
        write_key_matrix(matrix, rule, s);
        write_file(fs::path(opt.out_dir) / "keymatrix.txt", s.str());
    }
    for (const UserBundle& b : bundles)
        write_file(fs::path(opt.out_dir) / ("bundle_" + std::to_string(b.user) + ".txt"),
                   bundle_to_string(b));

    int sset_total = 0;
    for (UserId u = 1; u <= h.user_count(); ++u) sset_total += static_cast<int>(ssets.sset(u).size());
    out << "material-size: " << ssets.ground_size << "\n";
    out << "sset-size-total: " << sset_total << "\n";
    out << "nonzero-keys: " << matrix.nonzero_count() << "\n";
    return 0;
}

int cmd_key(const std::string& out_dir, UserId i, UserId j, std::ostream& out) {
    SSetTable ssets;
    {
        std::istringstream in(read_file(fs::path(out_dir) / "ssets.txt"));
        ssets = read_ssets(in);
    }
    StoredKeyMatrix stored;
    {
        std::istringstream in(read_file(fs::path(out_dir) / "keymatrix.txt"));
        stored = read_key_matrix(in);
    }
    if (i < 1 || i > ssets.user_count() || j < 1 || j > ssets.user_count())
        throw ValidationError("user ids must lie in 1.." + std::to_string(ssets.user_count()));
    IndexSet delta = i == j ? IndexSet{} : delta_set(ssets, i, j, stored.rule);
    out << "delta " << index_set_to_string(delta) << "\n";
    out << "key " << to_hex(stored.matrix.key(i, j)) << "\n";
    if (stored.matrix.is_zero(i, j)) out << "forbidden\n";
    return 0;
}

int cmd_verify_state(const std::string& hierarchy, const std::string& out_dir, std::ostream& out) {
    Hierarchy h = load_hierarchy(hierarchy);
    SSetTable ssets;
    {
        std::istringstream in(read_file(fs::path(out_dir) / "ssets.txt"));
        ssets = read_ssets(in);
    }
    StoredKeyMatrix stored;
    {
        std::istringstream in(read_file(fs::path(out_dir) / "keymatrix.txt"));
        stored = read_key_matrix(in);
    }
    VerificationReport report = verify_scheme(stored.matrix, policy_matrix(h));
    report.rule_used = stored.rule;
    report.material_size = ssets.ground_size;
    for (UserId u = 1; u <= ssets.user_count(); ++u)
        report.sset_size_total += static_cast<int>(ssets.sset(u).size());
    write_report(report, out);
    return report.policy_match ? 0 : 1;
}

int cmd_verify_random(int trials, const std::string& shape, const std::string& rule,
                      const std::string& seed_hex, std::ostream& out) {
    Bytes seed_bytes = from_hex(seed_hex);
    std::uint64_t seed = fnv1a64(seed_bytes);
    RandomCheckReport report =
        random_instance_check(kRandomCheckMaxUsers, trials, seed, parse_shape(shape), parse_delta_rule(rule));
    write_random_check_report(report, out);
    return report.all_passed() ? 0 : 1;
}

int cmd_sim(const std::string& out_dir, const std::string& scenario_path, std::ostream& out) {
    SSetTable ssets;
    {
        std::istringstream in(read_file(fs::path(out_dir) / "ssets.txt"));
        ssets = read_ssets(in);
    }
    StoredKeyMatrix stored;
    {
        std::istringstream in(read_file(fs::path(out_dir) / "keymatrix.txt"));
        stored = read_key_matrix(in);
    }
    std::vector<UserBundle> bundles;
    for (UserId u = 1; u <= ssets.user_count(); ++u)
        bundles.push_back(bundle_from_string(read_file(fs::path(out_dir) / ("bundle_" + std::to_string(u) + ".txt"))));
    Scenario scenario = parse_scenario(read_file(scenario_path));
    Transcript transcript = run_scenario(bundles, ssets, scenario, stored.rule);
    write_transcript(transcript, out);
    return transcript.all_pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"key pre-distribution for hierarchies with mandatory access control"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "derive S-sets, key matrix and per-user bundles");
    gen_cmd->add_option("--hierarchy", gen.hierarchy, "hierarchy file, or the preset 'fig1'")->required();
    gen_cmd->add_option("--sizes", gen.sizes, "block sizes: comma list, uniform:<b>, or 'paper'");
    auto* key_len_opt = gen_cmd->add_option("--key-len", gen.key_len, "key element length in bytes");
    gen_cmd->add_option("--seed", gen.seed_hex, "material seed (hex)");
    gen_cmd->add_option("--rule", gen.rule, "delta rule: containment or intersection");
    gen_cmd->add_option("--material", gen.material, "seeded (default) or the bundled one-byte 'paper' set");
    gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();

    std::string key_out_dir;
    UserId key_i = 0, key_j = 0;
    auto* key_cmd = app.add_subcommand("key", "print one directed pair key and its delta set");
    key_cmd->add_option("i", key_i, "receiving user")->required();
    key_cmd->add_option("j", key_j, "sending user")->required();
    key_cmd->add_option("--out", key_out_dir, "directory written by gen")->required();

    std::string ver_hierarchy, ver_out_dir, ver_shape = "tree", ver_rule = "containment", ver_seed = "00";
    int ver_trials = 0;
    auto* verify_cmd = app.add_subcommand("verify", "check the key matrix against the channel policy");
    verify_cmd->add_option("--hierarchy", ver_hierarchy, "hierarchy file or 'fig1' (state mode)");
    verify_cmd->add_option("--out", ver_out_dir, "directory written by gen (state mode)");
    verify_cmd->add_option("--trials", ver_trials, "random-instance mode: number of trials");
    verify_cmd->add_option("--shape", ver_shape, "random-instance mode: tree or dag");
    verify_cmd->add_option("--rule", ver_rule, "random-instance mode: delta rule");
    verify_cmd->add_option("--seed", ver_seed, "random-instance mode: seed (hex)");

    std::string sim_out_dir, sim_scenario;
    auto* sim_cmd = app.add_subcommand("sim", "run a scenario over simplex channels using the bundles");
    sim_cmd->add_option("--out", sim_out_dir, "directory written by gen")->required();
    sim_cmd->add_option("--scenario", sim_scenario, "scenario file")->required();

    auto* example_cmd = app.add_subcommand("paper-example", "print the bundled reference example and its errata");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) {
            gen.key_len_given = key_len_opt->count() > 0;
            return cmd_gen(gen, out);
        }
        if (key_cmd->parsed()) return cmd_key(key_out_dir, key_i, key_j, out);
        if (verify_cmd->parsed()) {
            if (ver_trials > 0) return cmd_verify_random(ver_trials, ver_shape, ver_rule, ver_seed, out);
            if (ver_hierarchy.empty() || ver_out_dir.empty())
                throw ValidationError("verify needs either --trials or both --hierarchy and --out");
            return cmd_verify_state(ver_hierarchy, ver_out_dir, out);
        }
        if (sim_cmd->parsed()) return cmd_sim(sim_out_dir, sim_scenario, out);
        if (example_cmd->parsed()) {
            paper_example::print_example(out);
            return 0;
        }
    } catch (const KeyGenError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace kdpmac::cli
