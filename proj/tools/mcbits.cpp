#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mcbits/algo_a.hpp"
#include "mcbits/algo_b.hpp"
#include "mcbits/algo_c.hpp"
#include "mcbits/analysis.hpp"
#include "mcbits/bitio.hpp"
#include "mcbits/coding.hpp"
#include "mcbits/extractors.hpp"
#include "mcbits/markov.hpp"

using namespace mcbits;

namespace {

struct token_error : std::runtime_error {
  token_error(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)) {}
};
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- symbol IO

Symbol parse_token(const std::string& tok, const Alphabet& alphabet, std::size_t position) {
  if (const int idx = alphabet.find(tok); idx >= 0) return idx;
  // fall back to 1-based numeric states, with or without a leading 's'
  const std::string digits = (tok.size() > 1 && tok[0] == 's') ? tok.substr(1) : tok;
  if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
    const long v = std::stol(digits);
    if (v >= 1 && v <= alphabet.n) return static_cast<Symbol>(v - 1);
  }
  throw token_error("unknown symbol token '" + tok + "'", position);
}

// Pulls symbols one at a time so the streaming algorithm can emit as it goes.
class SymbolReader {
 public:
  SymbolReader(std::istream& in, const Alphabet& alphabet, bool bytes)
      : in_(in), alphabet_(alphabet), bytes_(bytes) {}

  std::optional<Symbol> next() {
    ++position_;
    if (bytes_) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) return std::nullopt;
      if (c >= alphabet_.n) throw token_error("byte value " + std::to_string(c) + " out of range",
                                              position_);
      return static_cast<Symbol>(c);
    }
    while (pending_.empty()) {
      std::string tok;
      if (!(in_ >> tok)) return std::nullopt;
      // commas are token separators too
      std::size_t begin = 0;
      for (std::size_t i = 0; i <= tok.size(); ++i) {
        if (i == tok.size() || tok[i] == ',') {
          if (i > begin) pending_.push_back(tok.substr(begin, i - begin));
          begin = i + 1;
        }
      }
    }
    const std::string piece = pending_.front();
    pending_.erase(pending_.begin());
    return parse_token(piece, alphabet_, position_);
  }

 private:
  std::istream& in_;
  const Alphabet& alphabet_;
  bool bytes_;
  std::size_t position_ = 0;
  std::vector<std::string> pending_;
};

class BitWriter {
 public:
  BitWriter(std::ostream& out, bool packed) : out_(out), packed_(packed) {}
  void write(const BitString& bits) {
    if (packed_)
      all_ += bits;
    else
      out_ << bits;
  }
  void close() {
    if (packed_) {
      const auto bytes = pack_bits(all_);
      out_.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()));
    } else {
      out_ << '\n';
    }
    out_.flush();
  }

 private:
  std::ostream& out_;
  bool packed_;
  BitString all_;
};

// ------------------------------------------------------------ algorithm map

struct AlgoOptions {
  std::string algorithm;
  std::string psi = "elias";
  std::int64_t window = 4;
  std::vector<std::int64_t> windows;
  std::int64_t split_threshold = 64;
  std::string segment_rule = "halves";
  bool trim_final_lane = false;
  int peres_depth = kPeresDefaultDepth;
};

Extractor make_extractor(const AlgoOptions& opt, const std::string& name) {
  if (name == "vn") return Extractor{Scheme::von_neumann};
  if (name == "elias") return Extractor{Scheme::elias};
  if (name == "peres") return Extractor{Scheme::peres, opt.peres_depth};
  throw usage_error("unknown extractor '" + name + "'");
}

WindowSchedule make_schedule(const AlgoOptions& opt, int n) {
  if (opt.windows.empty()) return constant_window(opt.window);
  if (static_cast<int>(opt.windows.size()) != n)
    throw usage_error("--windows needs one value per state");
  return per_state_window(opt.windows);
}

SegmentRule make_segment_rule(const std::string& name) {
  if (name == "whole") return whole_segment_rule();
  if (name == "halves") return halves_segment_rule();
  throw usage_error("unknown segment rule '" + name + "'");
}

AlgorithmFn make_algorithm(const AlgoOptions& opt, int n) {
  const Extractor psi = make_extractor(opt, opt.psi);
  const AlgoAOptions a_opts{.trim_final_lane = opt.trim_final_lane};
  if (opt.algorithm == "vn") return [](const StateSeq& x) { return von_neumann(x); };
  if (opt.algorithm == "elias") return [](const StateSeq& x) { return elias(x); };
  if (opt.algorithm == "peres")
    return [d = opt.peres_depth](const StateSeq& x) { return peres(x, d); };
  if (opt.algorithm == "a")
    return [n, psi, a_opts](const StateSeq& x) { return algorithm_a(x, n, psi, a_opts); };
  if (opt.algorithm == "a-seg") {
    const SegmentRule rule = make_segment_rule(opt.segment_rule);
    return [n, psi, rule, a_opts](const StateSeq& x) {
      return algorithm_a_segmented(x, n, psi, rule, a_opts);
    };
  }
  if (opt.algorithm == "a-split")
    return [n, psi, k = opt.split_threshold, a_opts](const StateSeq& x) {
      return algorithm_a_split_stream(x, n, psi, k, a_opts);
    };
  if (opt.algorithm == "b") {
    const WindowSchedule schedule = make_schedule(opt, n);
    return [n, psi, schedule](const StateSeq& x) { return algorithm_b(x, n, psi, schedule); };
  }
  if (opt.algorithm == "c") return [n](const StateSeq& x) { return algorithm_c(x, n); };
  if (opt.algorithm == "concat-first")
    return [n, psi](const StateSeq& x) { return psi(decompose(x, n).lanes[0]); };
  if (opt.algorithm == "concat-all")
    return [n, psi](const StateSeq& x) {
      BitString out;
      for (const auto& lane : decompose(x, n).lanes) out += psi(lane);
      return out;
    };
  throw usage_error("unknown algorithm '" + opt.algorithm + "'");
}

// ----------------------------------------------------------------- commands

struct ExtractArgs {
  AlgoOptions algo;
  int states = 0;
  std::string alphabet_file, chain_file;
  std::string input = "-", output = "-";
  std::string format = "ascii01";
  std::string input_mode = "tokens";
  bool normalize = false;
  std::int64_t sample_length = 0;
  std::uint64_t seed = 0;
  bool seeded = false;
};

Alphabet load_alphabet_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open alphabet file: " + path);
  std::vector<std::string> names;
  std::string tok;
  while (in >> tok) {
    if (names.empty() && tok == "states") continue;
    names.push_back(tok);
  }
  return Alphabet(std::move(names));
}

int run_extract(const ExtractArgs& args) {
  std::optional<ChainModel> chain;
  std::optional<Alphabet> alphabet;
  if (!args.chain_file.empty()) {
    chain = ChainModel::load_file(args.chain_file, args.normalize);
    alphabet = chain->alphabet();
  } else if (!args.alphabet_file.empty()) {
    alphabet = load_alphabet_file(args.alphabet_file);
  } else if (args.states >= 1) {
    alphabet = Alphabet(args.states);
  } else {
    throw usage_error("one of --states, --alphabet or --chain is required");
  }
  if (args.seeded && !chain) throw usage_error("--seed sampling needs --chain");
  const int n = alphabet->n;

  std::ifstream file_in;
  if (!args.seeded && args.input != "-") {
    file_in.open(args.input, args.input_mode == "bytes" ? std::ios::binary : std::ios::in);
    if (!file_in) throw std::runtime_error("cannot open input: " + args.input);
  }
  std::istream& in = file_in.is_open() ? file_in : std::cin;

  std::ofstream file_out;
  if (args.output != "-") {
    file_out.open(args.output, args.format == "packed" ? std::ios::binary : std::ios::out);
    if (!file_out) throw std::runtime_error("cannot open output: " + args.output);
  }
  std::ostream& out = file_out.is_open() ? file_out : std::cout;
  BitWriter writer(out, args.format == "packed");

  if (args.algo.algorithm == "b" && !args.seeded) {
    // streaming: bits leave as soon as a window completes
    StreamExtractor stream(n, make_extractor(args.algo, args.algo.psi),
                           make_schedule(args.algo, n));
    SymbolReader reader(in, *alphabet, args.input_mode == "bytes");
    while (auto s = reader.next()) {
      const BitString bits = stream.push(*s);
      if (!bits.empty()) {
        writer.write(bits);
        out.flush();
      }
    }
    writer.close();
    return 0;
  }

  StateSeq x;
  if (args.seeded) {
    if (args.sample_length < 1) throw usage_error("--seed sampling needs --length >= 1");
    x = sample(*chain, static_cast<std::size_t>(args.sample_length), args.seed);
  } else {
    SymbolReader reader(in, *alphabet, args.input_mode == "bytes");
    while (auto s = reader.next()) x.push_back(*s);
  }
  if (!x.empty()) writer.write(make_algorithm(args.algo, n)(x));
  writer.close();
  return 0;
}

void print_report(const EnumerationReport& report) {
  std::cout << "sequences " << report.sequences << "\n";
  std::cout << "outputs " << report.probability.size() << "\n";
  std::cout << "total_probability " << report.total.get_str() << "\n";
  std::cout << "uniform " << (report.uniform ? "true" : "false") << "\n";
  std::cout << "expected_length_exact " << report.expected_length.get_str() << "\n";
  std::cout << "expected_length " << to_decimal(report.expected_length, 3) << "\n";
  for (const auto& [y, p] : report.probability)
    std::cout << "P " << (y.empty() ? "-" : y) << " " << p.get_str() << " " << to_decimal(p, 7)
              << "\n";
}

int run_enumerate(const std::string& chain_file, bool normalize, int length,
                  const std::string& start_name, const AlgoOptions& algo, std::uint64_t budget,
                  int threads) {
  const ChainModel m = ChainModel::load_file(chain_file, normalize);
  Symbol start = 0;
  if (!start_name.empty()) {
    start = parse_token(start_name, m.alphabet(), 0);
  } else if (m.start()) {
    for (int i = 0; i < m.states(); ++i)
      if ((*m.start())[static_cast<std::size_t>(i)] == 1) start = i;
  }
  const auto report =
      enumerate_distribution(m, length, start, make_algorithm(algo, m.states()), budget, threads);
  print_report(report);
  return 0;
}

int run_efficiency(const std::string& chain_file, bool normalize, int states,
                   std::int64_t window_min, std::int64_t window_max) {
  std::optional<ChainModel> m;
  if (!chain_file.empty())
    m = ChainModel::load_file(chain_file, normalize);
  else if (states >= 1)
    m = ChainModel::uniform(states);
  else
    throw usage_error("efficiency needs --chain or --states");
  const auto curve = efficiency_curve(*m, window_min, window_max);
  for (const auto& point : curve)
    std::cout << "eta " << point.window << " " << point.eta.get_str() << " "
              << to_decimal(point.eta, 6) << "\n";
  return 0;
}

int run_entropy(const std::string& chain_file, bool normalize) {
  const ChainModel m = ChainModel::load_file(chain_file, normalize);
  const auto u = stationary(m);
  for (int i = 0; i < m.states(); ++i)
    std::cout << "stationary " << m.alphabet().name(i) << " "
              << u[static_cast<std::size_t>(i)].get_str() << " "
              << to_decimal(u[static_cast<std::size_t>(i)], 6) << "\n";
  std::ostringstream rate;
  rate.precision(6);
  rate << std::fixed << entropy_rate(m);
  std::cout << "entropy_rate_bits_per_symbol " << rate.str() << "\n";
  return 0;
}

ExitSequences load_exit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open exit-sequence file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos)
    lines.pop_back();
  if (lines.empty()) throw std::runtime_error("exit-sequence file is empty");

  const int n = static_cast<int>(lines.size()) - 1;
  if (n < 1) throw std::runtime_error("exit-sequence file has no lanes");
  Alphabet alphabet(n);

  ExitSequences e;
  std::istringstream first(lines[0]);
  std::string tok;
  if (!(first >> tok)) throw std::runtime_error("missing start state");
  e.start = parse_token(tok, alphabet, 0);
  for (int i = 0; i < n; ++i) {
    std::istringstream ls(lines[static_cast<std::size_t>(i) + 1]);
    StateSeq lane;
    std::size_t pos = 0;
    while (ls >> tok) lane.push_back(parse_token(tok, alphabet, ++pos));
    e.lanes.push_back(std::move(lane));
  }
  return e;
}

int run_feasibility(const std::string& exit_file) {
  const ExitSequences e = load_exit_file(exit_file);
  if (const auto end = feasible_end(e)) {
    std::cout << "feasible true\nending_state " << (*end + 1) << "\n";
  } else {
    std::cout << "feasible false\n";
  }
  return 0;
}

int run_counting(int states, int length, const AlgoOptions& algo) {
  const auto report = verify_counting_condition(states, length, make_algorithm(algo, states));
  std::cout << "sequences " << report.sequences << "\n";
  std::cout << "groups " << report.groups << "\n";
  std::cout << (report.pass ? "pass" : "fail") << "\n";
  if (report.violation) {
    const auto& v = *report.violation;
    std::cout << "start " << (v.start + 1) << "\ncount_matrix";
    for (auto k : v.count_matrix) std::cout << " " << k;
    std::cout << "\noutput " << (v.output_a.empty() ? "-" : v.output_a) << " count " << v.count_a
              << "\noutput " << (v.output_b.empty() ? "-" : v.output_b) << " count " << v.count_b
              << "\n";
  }
  return report.pass ? 0 : 1;
}

int run_roundtrip(int states, int length) {
  std::uint64_t checked = 0;
  StateSeq x(static_cast<std::size_t>(length), 0);
  while (true) {
    if (reconstruct(decompose(x, states)) != x) {
      std::cout << "fail\n";
      return 1;
    }
    ++checked;
    std::size_t pos = x.size();
    bool done = true;
    while (pos-- > 0) {
      if (++x[pos] < states) {
        done = false;
        break;
      }
      x[pos] = 0;
    }
    if (done) break;
  }
  std::cout << "sequences " << checked << "\npass\n";
  return 0;
}

int run_sample(const std::string& chain_file, bool normalize, std::int64_t length,
               std::uint64_t seed, const std::string& output) {
  const ChainModel m = ChainModel::load_file(chain_file, normalize);
  if (length < 1) throw usage_error("sample needs --length >= 1");
  const StateSeq x = sample(m, static_cast<std::size_t>(length), seed);
  std::ofstream file_out;
  if (output != "-") {
    file_out.open(output);
    if (!file_out) throw std::runtime_error("cannot open output: " + output);
  }
  std::ostream& out = file_out.is_open() ? file_out : std::cout;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (t > 0) out << (t % 32 == 0 ? '\n' : ' ');
    out << m.alphabet().name(x[t]);
  }
  out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unbiased random bits from Markov chain trajectories"};
  app.require_subcommand(1);

  // ------------------------------------------------------------- extract
  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "convert a trajectory into unbiased bits");
  extract->add_option("--algorithm", ex.algo.algorithm,
                      "vn|elias|peres|a|a-seg|a-split|b|c|concat-first|concat-all")
      ->required();
  extract->add_option("--psi", ex.algo.psi, "per-lane extractor: vn|elias|peres");
  extract->add_option("--window", ex.algo.window, "window size for algorithm b");
  extract->add_option("--windows", ex.algo.windows, "per-state window sizes for algorithm b");
  extract->add_option("--split-threshold", ex.algo.split_threshold, "piece length for a-split");
  extract->add_option("--segment-rule", ex.algo.segment_rule, "whole|halves for a-seg");
  extract->add_flag("--trim-final-lane", ex.algo.trim_final_lane,
                    "algorithm a: drop the last symbol of the ending state's lane too");
  extract->add_option("--peres-depth", ex.algo.peres_depth, "iteration depth for peres");
  extract->add_option("--states", ex.states, "alphabet size; tokens are 1..n");
  extract->add_option("--alphabet", ex.alphabet_file, "file with state names");
  extract->add_option("--chain", ex.chain_file, "chain spec file (alphabet + matrix)");
  extract->add_option("--input", ex.input, "symbol source path or - for stdin");
  extract->add_option("--output", ex.output, "bit sink path or - for stdout");
  extract->add_option("--format", ex.format, "ascii01|packed")
      ->check(CLI::IsMember({"ascii01", "packed"}));
  extract->add_option("--input-mode", ex.input_mode, "tokens|bytes")
      ->check(CLI::IsMember({"tokens", "bytes"}));
  extract->add_flag("--normalize", ex.normalize, "rescale chain rows to sum to 1");
  extract->add_option("--length", ex.sample_length, "trajectory length for sampling mode");
  auto* seed_opt =
      extract->add_option("--seed", ex.seed, "sample the trajectory from --chain instead of reading");

  // ------------------------------------------------------------- analyze
  auto* analyze = app.add_subcommand("analyze", "exact analysis of extraction schemes");
  analyze->require_subcommand(1);

  AlgoOptions en_algo;
  std::string en_chain, en_start;
  int en_length = 0, en_threads = 1;
  bool en_normalize = false;
  std::uint64_t en_budget = 100000000;
  auto* enumerate = analyze->add_subcommand("enumerate", "exact output distribution");
  enumerate->add_option("--chain", en_chain, "chain spec file")->required();
  enumerate->add_option("--length", en_length, "trajectory length")->required();
  enumerate->add_option("--start", en_start, "start state (default: the file's start or state 1)");
  enumerate->add_option("--algorithm", en_algo.algorithm, "a|a-seg|a-split|b|c|...")->required();
  enumerate->add_option("--psi", en_algo.psi, "per-lane extractor");
  enumerate->add_option("--window", en_algo.window, "window size for algorithm b");
  enumerate->add_option("--budget", en_budget, "maximum number of trajectories");
  enumerate->add_option("--threads", en_threads, "worker threads");
  enumerate->add_flag("--normalize", en_normalize, "rescale chain rows to sum to 1");

  std::string eff_chain;
  int eff_states = 0;
  std::int64_t eff_min = 2, eff_max = 8;
  bool eff_normalize = false;
  auto* efficiency = analyze->add_subcommand("efficiency", "exact window-efficiency curve");
  efficiency->add_option("--chain", eff_chain, "chain spec file");
  efficiency->add_option("--states", eff_states, "uniform chain with this many states");
  efficiency->add_option("--window-min", eff_min);
  efficiency->add_option("--window-max", eff_max);
  efficiency->add_flag("--normalize", eff_normalize);

  std::string ent_chain;
  bool ent_normalize = false;
  auto* entropy = analyze->add_subcommand("entropy", "stationary distribution and entropy rate");
  entropy->add_option("--chain", ent_chain, "chain spec file")->required();
  entropy->add_flag("--normalize", ent_normalize);

  // -------------------------------------------------------------- verify
  auto* verify = app.add_subcommand("verify", "structural checks");
  verify->require_subcommand(1);

  std::string feas_file;
  auto* feasibility = verify->add_subcommand("feasibility", "complete-walk check of exit lanes");
  feasibility->add_option("--exits", feas_file, "exit-sequence file")->required();

  AlgoOptions ct_algo;
  int ct_states = 0, ct_length = 0;
  auto* counting = verify->add_subcommand("counting", "group-counting unbiasedness check");
  counting->add_option("--states", ct_states)->required();
  counting->add_option("--length", ct_length)->required();
  counting->add_option("--algorithm", ct_algo.algorithm)->required();
  counting->add_option("--psi", ct_algo.psi);
  counting->add_option("--window", ct_algo.window);

  int rt_states = 0, rt_length = 0;
  auto* roundtrip = verify->add_subcommand("roundtrip", "decompose/reconstruct identity");
  roundtrip->add_option("--states", rt_states)->required();
  roundtrip->add_option("--length", rt_length)->required();

  // -------------------------------------------------------------- sample
  std::string sm_chain, sm_output = "-";
  std::int64_t sm_length = 0;
  std::uint64_t sm_seed = 0;
  bool sm_normalize = false;
  auto* sampler = app.add_subcommand("sample", "emit a seeded trajectory");
  sampler->add_option("--chain", sm_chain)->required();
  sampler->add_option("--length", sm_length)->required();
  sampler->add_option("--seed", sm_seed);
  sampler->add_option("--output", sm_output);
  sampler->add_flag("--normalize", sm_normalize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;
  }
  ex.seeded = seed_opt->count() > 0;

  try {
    if (*extract) return run_extract(ex);
    if (*enumerate)
      return run_enumerate(en_chain, en_normalize, en_length, en_start, en_algo, en_budget,
                           en_threads);
    if (*efficiency) return run_efficiency(eff_chain, eff_normalize, eff_states, eff_min, eff_max);
    if (*entropy) return run_entropy(ent_chain, ent_normalize);
    if (*feasibility) return run_feasibility(feas_file);
    if (*counting) return run_counting(ct_states, ct_length, ct_algo);
    if (*roundtrip) return run_roundtrip(rt_states, rt_length);
    if (*sampler) return run_sample(sm_chain, sm_normalize, sm_length, sm_seed, sm_output);
  } catch (const token_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
