// Command-line front end: construct the bundled distributions and models,
// check independence levels, classify, compute marginals and connectivity
// probabilities, search for connected colorings, reduce colors, and print
// threshold tables.  Exit codes: 0 success (including a proved
// impossibility), 1 honest failure or independence violation, 2 usage or
// input errors (malformed JSON, bad arguments, exceeded caps).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deplab/deplab.hpp"

namespace {

using namespace deplab;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw usage_error("cannot open output file: " + out_path);
  out << text;
}

void emit_json(const Json& j, const std::string& out_path) {
  emit_text(j.dump(2) + "\n", out_path);
}

bool looks_like_model(const Json& j) { return j.is_object() && j.contains("palettes"); }

ExplicitDistribution load_distribution(const std::string& path) {
  const Json j = parse_json_text(read_input(path));
  if (looks_like_model(j)) return to_explicit(model_from_json(j));
  return distribution_from_json(j);
}

ColoringModel load_model(const std::string& path) {
  const Json j = parse_json_text(read_input(path));
  if (!looks_like_model(j))
    throw usage_error("this command needs a coloring model (object with palettes)");
  return model_from_json(j);
}

Scalar parse_probability(const std::string& text) {
  return Scalar(parse_rational(text));
}

BigFloat parse_epsilon(const std::string& text) {
  if (text.find('/') != std::string::npos)
    return BigFloat(parse_rational(text));
  return BigFloat::from_string(text);
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw usage_error("malformed size list: \"" + text + "\"");
    }
  }
  return out;
}

struct ConstructArgs {
  std::string name;
  int n = 0;
  bool n_set = false;
  std::string q_text;
  bool q_plus = false;
  std::string z_text;
  std::string sizes_text;
  int mod = 0;
  std::string out_path;
};

int run_construct(const ConstructArgs& a) {
  auto need_n = [&] {
    if (!a.n_set) throw usage_error("construction \"" + a.name + "\" needs --n");
    return a.n;
  };
  auto need_z = [&] {
    if (a.z_text.empty()) throw usage_error("construction \"" + a.name + "\" needs --z");
    return parse_rational(a.z_text);
  };

  if (a.name == "cm") {
    const int n = need_n();
    Scalar q;
    if (a.q_plus) {
      q = cm_q(n);
    } else if (!a.q_text.empty()) {
      q = parse_probability(a.q_text);
    } else {
      throw usage_error("construction \"cm\" needs --q or --q-plus");
    }
    emit_json(json_from_distribution(cm(n, q)), a.out_path);
  } else if (a.name == "cc") {
    emit_json(json_from_distribution(cc(need_n())), a.out_path);
  } else if (a.name == "sc") {
    emit_json(json_from_distribution(sc(need_n())), a.out_path);
  } else if (a.name == "mod4-two-clique") {
    emit_json(json_from_distribution(mod4_two_clique(need_n())), a.out_path);
  } else if (a.name == "two-cliques-trig") {
    emit_json(json_from_distribution(two_cliques_trig(need_n())), a.out_path);
  } else if (a.name == "triangle-t") {
    emit_json(json_from_distribution(triangle_t()), a.out_path);
  } else if (a.name == "gnp-mod") {
    if (a.mod == 0) throw usage_error("construction \"gnp-mod\" needs --mod");
    emit_json(json_from_distribution(gnp_mod(need_n(), a.mod)), a.out_path);
  } else if (a.name == "kn-family") {
    const int n = need_n();
    const Rational z = need_z();
    emit_json(json_from_distribution(kn_family_eval(kn_family(n), z)), a.out_path);
  } else if (a.name == "gnp-mod2-model") {
    emit_json(json_from_model(gnp_mod2_model(need_n())), a.out_path);
  } else if (a.name == "cs") {
    emit_json(json_from_model(cs(need_n())), a.out_path);
  } else if (a.name == "three-block") {
    if (a.sizes_text.empty())
      throw usage_error("construction \"three-block\" needs --sizes a,b,c");
    const auto sizes = parse_sizes(a.sizes_text);
    if (sizes.size() != 3)
      throw usage_error("construction \"three-block\" needs exactly three sizes");
    emit_json(json_from_model(three_block(sizes[0], sizes[1], sizes[2])), a.out_path);
  } else if (a.name == "two-clique-color") {
    emit_json(json_from_model(two_clique_color_model(need_n(), Scalar(need_z()))),
              a.out_path);
  } else {
    throw usage_error(
        "unknown construction \"" + a.name +
        "\"; available: cm, cc, sc, mod4-two-clique, two-cliques-trig, triangle-t, "
        "gnp-mod, kn-family, gnp-mod2-model, cs, three-block, two-clique-color");
  }
  return 0;
}

int run_check(const std::string& input, const std::string& level_text,
              const std::string& out_path) {
  const ExplicitDistribution d = load_distribution(input);
  if (level_text == "all") {
    Json out;
    bool violated = false;
    for (const Level level : {Level::pairwise, Level::matching, Level::edge_subgraph,
                              Level::subgraph}) {
      const auto cert = check_level(d, level);
      if (cert) {
        violated = true;
        out[level_name(level)] = json_from_certificate(*cert, d.n);
      } else {
        out[level_name(level)] = "pass";
      }
    }
    out["result"] = violated ? "violation" : "pass";
    emit_json(out, out_path);
    return violated ? 1 : 0;
  }
  const Level level = parse_level(level_text);
  const auto cert = check_level(d, level);
  Json out;
  out["level"] = level_name(level);
  if (cert) {
    out["result"] = "violation";
    out["certificate"] = json_from_certificate(*cert, d.n);
    emit_json(out, out_path);
    return 1;
  }
  out["result"] = "pass";
  emit_json(out, out_path);
  return 0;
}

int run_marginals(const std::string& input, const std::string& out_path) {
  const Json j = parse_json_text(read_input(input));
  Json rows = Json::array();
  Json out;
  if (looks_like_model(j)) {
    const ColoringModel m = model_from_json(j);
    for (int u = 0; u < m.n; ++u) {
      for (int v = u + 1; v < m.n; ++v) {
        Json row;
        row["edge"] = Json::array({u, v});
        row["p"] = json_from_scalar(edge_marginal(m, u, v));
        rows.push_back(std::move(row));
      }
    }
    out["min"] = json_from_scalar(model_min_marginal(m));
  } else {
    const ExplicitDistribution d = distribution_from_json(j);
    for (int u = 0; u < d.n; ++u) {
      for (int v = u + 1; v < d.n; ++v) {
        Json row;
        row["edge"] = Json::array({u, v});
        row["p"] = json_from_scalar(marginal(d, u, v));
        rows.push_back(std::move(row));
      }
    }
    out["min"] = json_from_scalar(min_marginal(d));
  }
  out["marginals"] = std::move(rows);
  emit_json(out, out_path);
  return 0;
}

int run_connectivity(const std::string& input, const std::string& out_path) {
  const ExplicitDistribution d = load_distribution(input);
  const Scalar p = prob_connected(d);
  Json out;
  out["prob_connected"] = json_from_scalar(p);
  out["approx"] = to_bigfloat(p).to_decimal(15);
  emit_json(out, out_path);
  return 0;
}

int run_connect(const std::string& input, const std::string& algo,
                std::optional<std::uint64_t> seed, const std::string& epsilon_text,
                const std::string& out_path) {
  const ColoringModel m = load_model(input);
  ConnectResult result;
  if (algo == "exhaustive") {
    result = connect_exhaustive(m);
  } else if (algo == "two-color") {
    result = connect_two_color(m);
  } else if (algo == "table") {
    result = connect_table(m);
  } else if (algo == "recolor") {
    if (!seed) throw usage_error("algorithm \"recolor\" needs --seed");
    std::optional<BigFloat> eps;
    if (!epsilon_text.empty()) eps = parse_epsilon(epsilon_text);
    result = connect_recolor(m, eps, *seed);
  } else {
    throw usage_error("unknown algorithm \"" + algo +
                      "\"; available: two-color, table, recolor, exhaustive");
  }
  emit_json(json_from_connect_result(result), out_path);
  return result.outcome == ConnectOutcome::fail ? 1 : 0;
}

int run_reduce(const std::string& input, const std::string& out_path) {
  const ColoringModel m = load_model(input);
  emit_json(json_from_model(reduce_colors(m)), out_path);
  return 0;
}

int run_thresholds(int n_max, const std::string& format, const std::string& out_path) {
  const auto rows = threshold_table(n_max);
  if (format == "csv") {
    emit_text(threshold_table_csv(rows), out_path);
  } else if (format == "json") {
    emit_json(json_from_threshold_rows(rows), out_path);
  } else {
    throw usage_error("unknown format \"" + format + "\"; available: csv, json");
  }
  return 0;
}

int run_mc(const std::string& input, long long trials, std::optional<std::uint64_t> seed,
           const std::string& out_path) {
  if (!seed) throw usage_error("mc needs --seed");
  const ColoringModel m = load_model(input);
  const McEstimate estimate = mc_connectivity(m, trials, *seed, config::threads());
  emit_json(json_from_mc(estimate), out_path);
  return 0;
}

int run_hierarchy_demo() {
  struct Line {
    const char* label;
    ExplicitDistribution dist;
  };
  const std::vector<Line> lines = {
      {"cm(6,q+)", cm(6, cm_q(6))},
      {"sc(5)", sc(5)},
      {"cc(6)", cc(6)},
      {"triangle-t", triangle_t()},
  };
  for (const auto& line : lines) {
    std::cout << line.label << " = " << level_name(classify(line.dist).level) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of random graph distributions with limited dependencies"};
  app.require_subcommand(1);

  long precision = 256;
  int threads = 0;
  app.add_option("--precision", precision, "working precision in bits (default 256)");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  ConstructArgs construct_args;
  auto* cmd_construct =
      app.add_subcommand("construct", "emit a bundled distribution or model as JSON");
  cmd_construct->add_option("name", construct_args.name, "construction name")
      ->required();
  auto* n_opt = cmd_construct->add_option("--n", construct_args.n, "vertex count");
  cmd_construct->add_option("--q", construct_args.q_text, "mixing weight (rational)");
  cmd_construct->add_flag("--q-plus", construct_args.q_plus,
                          "use the optimal mixing weight");
  cmd_construct->add_option("--z", construct_args.z_text, "color bias (rational)");
  cmd_construct->add_option("--sizes", construct_args.sizes_text,
                            "comma-separated block sizes");
  cmd_construct->add_option("--mod", construct_args.mod, "edge-count modulus");
  cmd_construct->add_option("-o,--output", construct_args.out_path, "output file");

  std::string check_input, check_level_text = "all", check_out;
  auto* cmd_check = app.add_subcommand("check", "test independence conditions");
  cmd_check->add_option("input", check_input, "distribution or model JSON")->required();
  cmd_check->add_option("--level", check_level_text,
                        "pairwise|matching|edge-subgraph|subgraph|all");
  cmd_check->add_option("-o,--output", check_out, "output file");

  std::string classify_input, classify_out;
  auto* cmd_classify =
      app.add_subcommand("classify", "strongest satisfied independence level");
  cmd_classify->add_option("input", classify_input, "distribution or model JSON")
      ->required();
  cmd_classify->add_option("-o,--output", classify_out, "output file");

  std::string marginals_input, marginals_out;
  auto* cmd_marginals = app.add_subcommand("marginals", "per-edge probabilities");
  cmd_marginals->add_option("input", marginals_input, "distribution or model JSON")
      ->required();
  cmd_marginals->add_option("-o,--output", marginals_out, "output file");

  std::string connectivity_input, connectivity_out;
  auto* cmd_connectivity =
      app.add_subcommand("connectivity", "exact connectivity probability");
  cmd_connectivity->add_option("input", connectivity_input, "distribution or model JSON")
      ->required();
  cmd_connectivity->add_option("-o,--output", connectivity_out, "output file");

  std::string connect_input, connect_algo = "exhaustive", connect_epsilon, connect_out;
  std::uint64_t connect_seed_value = 0;
  auto* cmd_connect = app.add_subcommand("connect", "search for a connected coloring");
  cmd_connect->add_option("input", connect_input, "coloring model JSON")->required();
  cmd_connect->add_option("--algo", connect_algo,
                          "two-color|table|recolor|exhaustive");
  auto* connect_seed_opt =
      cmd_connect->add_option("--seed", connect_seed_value, "random seed");
  cmd_connect->add_option("--epsilon", connect_epsilon,
                          "margin above the recoloring threshold");
  cmd_connect->add_option("-o,--output", connect_out, "output file");

  std::string reduce_input, reduce_out;
  auto* cmd_reduce =
      app.add_subcommand("reduce-colors", "merge redundant palette colors");
  cmd_reduce->add_option("input", reduce_input, "coloring model JSON")->required();
  cmd_reduce->add_option("-o,--output", reduce_out, "output file");

  int thresholds_n_max = 0;
  std::string thresholds_format = "csv", thresholds_out;
  auto* cmd_thresholds = app.add_subcommand("thresholds", "threshold table");
  cmd_thresholds->add_option("--n-max", thresholds_n_max, "largest vertex count")
      ->required();
  cmd_thresholds->add_option("--format", thresholds_format, "csv|json");
  cmd_thresholds->add_option("-o,--output", thresholds_out, "output file");

  std::string mc_input, mc_out;
  long long mc_trials = 0;
  std::uint64_t mc_seed_value = 0;
  auto* cmd_mc = app.add_subcommand("mc", "Monte-Carlo connectivity estimate");
  cmd_mc->add_option("input", mc_input, "coloring model JSON")->required();
  cmd_mc->add_option("--trials", mc_trials, "number of samples")->required();
  auto* mc_seed_opt = cmd_mc->add_option("--seed", mc_seed_value, "random seed");
  cmd_mc->add_option("-o,--output", mc_out, "output file");

  auto* cmd_hierarchy = app.add_subcommand(
      "hierarchy-demo", "classify one separating example per level");
  (void)cmd_hierarchy;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    config::set_precision(precision);
    config::set_threads(threads);
    (void)n_opt;
    construct_args.n_set = n_opt->count() > 0;

    if (cmd_construct->parsed()) return run_construct(construct_args);
    if (cmd_check->parsed()) return run_check(check_input, check_level_text, check_out);
    if (cmd_classify->parsed()) {
      const ExplicitDistribution d = load_distribution(classify_input);
      emit_json(json_from_classification(classify(d), d.n), classify_out);
      return 0;
    }
    if (cmd_marginals->parsed()) return run_marginals(marginals_input, marginals_out);
    if (cmd_connectivity->parsed())
      return run_connectivity(connectivity_input, connectivity_out);
    if (cmd_connect->parsed()) {
      std::optional<std::uint64_t> seed;
      if (connect_seed_opt->count() > 0) seed = connect_seed_value;
      return run_connect(connect_input, connect_algo, seed, connect_epsilon,
                         connect_out);
    }
    if (cmd_reduce->parsed()) return run_reduce(reduce_input, reduce_out);
    if (cmd_thresholds->parsed())
      return run_thresholds(thresholds_n_max, thresholds_format, thresholds_out);
    if (cmd_mc->parsed()) {
      std::optional<std::uint64_t> seed;
      if (mc_seed_opt->count() > 0) seed = mc_seed_value;
      return run_mc(mc_input, mc_trials, seed, mc_out);
    }
    if (cmd_hierarchy->parsed()) return run_hierarchy_demo();
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kind_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
