// SPDX-License-Identifier: Apache-2.0

#include "helmdef/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "helmdef/assembly.hpp"
#include "helmdef/precond.hpp"

namespace helmdef {

namespace {

using nlohmann::json;

/// FNV-1a 64-bit over a byte string, rendered as fixed-width hex.
std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

PrecondConfig parse_precond(const json& j) {
  PrecondConfig pc;
  pc.tag = j.value("tag", pc.tag);
  pc.epsilon = j.value("epsilon", pc.epsilon);
  if (j.contains("beta2")) {
    const json& b = j.at("beta2");
    pc.beta2 = b.is_string() ? b.get<std::string>()
                             : format_double(b.get<double>());
  }
  pc.cycles = j.value("cycles", pc.cycles);
  pc.smoothing = j.value("smoothing", pc.smoothing);
  pc.omega = j.value("omega", pc.omega);
  if (j.contains("smoothing_by_p")) {
    for (const auto& [key, val] : j.at("smoothing_by_p").items()) {
      pc.smoothing_by_p[std::stoi(key)] = val.get<int>();
    }
  }
  if (j.contains("omega_by_p")) {
    for (const auto& [key, val] : j.at("omega_by_p").items()) {
      pc.omega_by_p[std::stoi(key)] = val.get<double>();
    }
  }
  return pc;
}

double parse_number_field(const json& j) {
  return j.is_string() ? std::stod(j.get<std::string>()) : j.get<double>();
}

}  // namespace

std::string PrecondConfig::label() const {
  if (tag == "DC_MG" || tag == "Deps_C_MG") {
    return tag + "^" + std::to_string(cycles);
  }
  return tag;
}

ExperimentConfig parse_config(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.study = j.value("study", cfg.study);
  cfg.problem = j.value("problem", cfg.problem);
  if (j.contains("k")) {
    for (const json& v : j.at("k")) cfg.wave_numbers.push_back(parse_number_field(v));
  }
  if (j.contains("p")) cfg.orders = j.at("p").get<std::vector<int>>();
  cfg.kh = j.value("kh", cfg.kh);
  if (j.contains("elements")) {
    cfg.elements = j.at("elements").get<std::vector<int>>();
  }
  if (j.contains("preconditioners")) {
    for (const json& pj : j.at("preconditioners")) {
      cfg.preconditioners.push_back(parse_precond(pj));
    }
  }
  if (j.contains("gmres")) {
    const json& g = j.at("gmres");
    cfg.gmres.tolerance = g.value("tolerance", cfg.gmres.tolerance);
    cfg.gmres.max_iterations = g.value("max_iterations", cfg.gmres.max_iterations);
  }
  if (j.contains("compare")) {
    const json& c = j.at("compare");
    cfg.compare_mode = c.value("mode", cfg.compare_mode);
    cfg.compare_tolerance = c.value("tolerance", cfg.compare_tolerance);
  }
  cfg.check_direct = j.value("check_direct", cfg.check_direct);
  cfg.direct_cap = j.value("direct_cap", cfg.direct_cap);
  cfg.samples = j.value("samples", cfg.samples);
  if (j.contains("multipliers")) {
    auto vals = j.at("multipliers").get<std::vector<double>>();
    if (vals.size() != 16) {
      throw std::invalid_argument("multipliers must hold 16 values");
    }
    std::copy(vals.begin(), vals.end(), cfg.multipliers.begin());
    cfg.has_multipliers = true;
  }
  cfg.composition = j.value("composition", cfg.composition);
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  if (j.contains("beta2")) cfg.beta2 = parse_number_field(j.at("beta2"));
  cfg.smoothing = j.value("smoothing", cfg.smoothing);
  cfg.omega = j.value("omega", cfg.omega);
  cfg.dense_cap = j.value("dense_cap", cfg.dense_cap);

  cfg.raw_dump = j.dump(2);
  cfg.hash = fnv1a_hex(cfg.raw_dump);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

double resolve_beta2(const std::string& expr, double k) {
  if (expr == "1/k") return 1.0 / k;
  if (expr == "1/(3k)") return 1.0 / (3.0 * k);
  return std::stod(expr);
}

int derived_elements(double k, double kh, int order) {
  int n = resolution_for(k, kh) + 1 - order;
  return std::max(n, 4);
}

Problem make_problem(const ExperimentConfig& cfg, int elements, int order,
                     double k) {
  if (cfg.problem == "travelling_wave_1d") {
    return travelling_wave_1d(elements, order, k);
  }
  if (cfg.problem == "point_source_1d") {
    return point_source_1d(elements, order, k);
  }
  if (cfg.problem == "point_source_2d") {
    return point_source_2d(elements, order, k);
  }
  if (cfg.problem == "layered_medium_2d") {
    Problem pb = layered_medium_2d(elements, order, k);
    if (cfg.has_multipliers) pb.field.multipliers = cfg.multipliers;
    return pb;
  }
  throw std::invalid_argument("unknown problem: " + cfg.problem);
}

namespace {

PrecondSpec to_spec(const PrecondConfig& pc, int order, double k) {
  PrecondSpec spec;
  if (pc.tag == "D") {
    spec.deflate = true;
    spec.drop = 0.0;
  } else if (pc.tag == "D_eps") {
    spec.deflate = true;
    spec.drop = pc.epsilon;
  } else if (pc.tag == "C_ex") {
    spec.shift = true;
    spec.cycles = 0;
  } else if (pc.tag == "DC_MG") {
    spec.deflate = true;
    spec.drop = 0.0;
    spec.shift = true;
    spec.cycles = pc.cycles;
  } else if (pc.tag == "Deps_C_MG") {
    spec.deflate = true;
    spec.drop = pc.epsilon;
    spec.shift = true;
    spec.cycles = pc.cycles;
  } else if (pc.tag != "none") {
    throw std::invalid_argument("unknown preconditioner tag: " + pc.tag);
  }
  if (spec.shift) spec.beta2 = resolve_beta2(pc.beta2, k);
  auto it = pc.smoothing_by_p.find(order);
  spec.smooth_steps = it != pc.smoothing_by_p.end() ? it->second : pc.smoothing;
  auto io = pc.omega_by_p.find(order);
  spec.omega = io != pc.omega_by_p.end() ? io->second : pc.omega;
  return spec;
}

RunRecord run_cell(const ExperimentConfig& cfg, const PrecondConfig& pc,
                   int order, double k, int elements) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.problem = cfg.problem;
  rec.tag = pc.label();
  rec.k = k;
  rec.order = order;
  rec.elements = elements;
  rec.config_hash = cfg.hash;

  Problem pb = make_problem(cfg, elements, order, k);
  DiscreteSystem sys = assemble(pb);
  rec.dofs = static_cast<long>(sys.A.rows());

  SolverSetup setup = compose(sys, to_spec(pc, order, k));
  GmresResult gr = gmres(setup.op, setup.rhs, setup.start, setup.monitor,
                         cfg.gmres);
  rec.iterations = gr.iterations;
  rec.converged = gr.converged;
  rec.residual = gr.residuals.empty() ? 0.0 : gr.residuals.back();
  if (setup.counts) {
    rec.matvecs = setup.counts->matvecs;
    rec.shift_solves = setup.counts->shift_solves;
    rec.vcycles = setup.counts->vcycles;
    rec.coarse_solves = setup.counts->coarse_solves;
  }
  if (cfg.check_direct && gr.converged && rec.dofs <= cfg.direct_cap) {
    DirectSolver direct(sys.A);
    Vec ref = direct.solve(sys.rhs);
    rec.direct_gap = (gr.solution - ref).norm() / ref.norm();
  }
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

long retained_size(const ExperimentConfig& cfg, int elements, int order) {
  long per_dim = elements + order - 1;  // basis minus the two boundary rows
  if (cfg.problem == "travelling_wave_1d") return per_dim;  // one end lifted
  per_dim -= 1;
  if (cfg.problem == "point_source_2d" || cfg.problem == "layered_medium_2d") {
    return per_dim * per_dim;
  }
  return per_dim;
}

}  // namespace

std::vector<RunRecord> run_iteration_sweep(const ExperimentConfig& cfg,
                                           int threads, long max_n) {
  struct Cell {
    const PrecondConfig* pc;
    int order;
    double k;
    int elements;
  };
  std::vector<Cell> cells;
  for (const PrecondConfig& pc : cfg.preconditioners) {
    for (int p : cfg.orders) {
      for (double k : cfg.wave_numbers) {
        int n_el = cfg.elements.empty() ? derived_elements(k, cfg.kh, p)
                                        : cfg.elements.front();
        if (max_n > 0 && retained_size(cfg, n_el, p) > max_n) {
          std::cerr << "skip " << pc.label() << " p=" << p << " k=" << k
                    << ": system larger than cap\n";
          continue;
        }
        cells.push_back({&pc, p, k, n_el});
      }
    }
  }

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      try {
        records[i] = run_cell(cfg, *c.pc, c.order, c.k, c.elements);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  int pool = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> ts;
    ts.reserve(pool);
    for (int t = 0; t < pool; ++t) ts.emplace_back(worker);
    for (std::thread& t : ts) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::string format_double(double v) {
  char buf[64];
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    auto res =
        std::to_chars(buf, buf + sizeof(buf), static_cast<long long>(v));
    return std::string(buf, res.ptr);
  }
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

const char* kRecordHeader =
    "problem,tag,k,p,elements,dofs,iterations,converged,residual,direct_gap,"
    "matvecs,shift_solves,vcycles,coarse_solves,seconds,config_hash";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

json record_to_json(const RunRecord& r) {
  json j;
  j["problem"] = r.problem;
  j["tag"] = r.tag;
  j["k"] = r.k;
  j["p"] = r.order;
  j["elements"] = r.elements;
  j["dofs"] = r.dofs;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residual"] = r.residual;
  if (std::isfinite(r.direct_gap)) j["direct_gap"] = r.direct_gap;
  j["matvecs"] = r.matvecs;
  j["shift_solves"] = r.shift_solves;
  j["vcycles"] = r.vcycles;
  j["coarse_solves"] = r.coarse_solves;
  j["seconds"] = r.seconds;
  j["config_hash"] = r.config_hash;
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.problem = j.at("problem").get<std::string>();
  r.tag = j.at("tag").get<std::string>();
  r.k = j.at("k").get<double>();
  r.order = j.at("p").get<int>();
  r.elements = j.at("elements").get<int>();
  r.dofs = j.at("dofs").get<long>();
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.residual = j.at("residual").get<double>();
  if (j.contains("direct_gap")) r.direct_gap = j.at("direct_gap").get<double>();
  r.matvecs = j.at("matvecs").get<long>();
  r.shift_solves = j.at("shift_solves").get<long>();
  r.vcycles = j.at("vcycles").get<long>();
  r.coarse_solves = j.at("coarse_solves").get<long>();
  r.seconds = j.at("seconds").get<double>();
  r.config_hash = j.at("config_hash").get<std::string>();
  return r;
}

}  // namespace

void write_records_csv(const std::vector<RunRecord>& records,
                       std::ostream& os) {
  os << kRecordHeader << "\n";
  for (const RunRecord& r : records) {
    os << r.problem << ',' << r.tag << ',' << format_double(r.k) << ','
       << r.order << ',' << r.elements << ',' << r.dofs << ',' << r.iterations
       << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.residual)
       << ','
       << (std::isfinite(r.direct_gap) ? format_double(r.direct_gap) : "nan")
       << ',' << r.matvecs << ',' << r.shift_solves << ',' << r.vcycles << ','
       << r.coarse_solves << ',' << format_double(r.seconds) << ','
       << r.config_hash << "\n";
  }
}

std::vector<RunRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty record stream");
  if (line != kRecordHeader) throw std::runtime_error("unknown record header");
  std::vector<RunRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 16) throw std::runtime_error("malformed record row");
    RunRecord r;
    r.problem = f[0];
    r.tag = f[1];
    r.k = parse_double(f[2]);
    r.order = std::stoi(f[3]);
    r.elements = std::stoi(f[4]);
    r.dofs = std::stol(f[5]);
    r.iterations = std::stoi(f[6]);
    r.converged = f[7] == "1";
    r.residual = parse_double(f[8]);
    r.direct_gap = parse_double(f[9]);
    r.matvecs = std::stol(f[10]);
    r.shift_solves = std::stol(f[11]);
    r.vcycles = std::stol(f[12]);
    r.coarse_solves = std::stol(f[13]);
    r.seconds = parse_double(f[14]);
    r.config_hash = f[15];
    out.push_back(std::move(r));
  }
  return out;
}

std::string records_to_json(const std::vector<RunRecord>& records,
                            const std::string& config_dump) {
  json j;
  j["config"] = config_dump.empty() ? json(nullptr) : json::parse(config_dump);
  json arr = json::array();
  for (const RunRecord& r : records) arr.push_back(record_to_json(r));
  j["records"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::vector<RunRecord> records_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<RunRecord> out;
  for (const json& rj : j.at("records")) out.push_back(record_from_json(rj));
  return out;
}

std::vector<ResultCell> cells_from_records(
    const std::vector<RunRecord>& records) {
  std::vector<ResultCell> cells;
  cells.reserve(records.size());
  for (const RunRecord& r : records) {
    ResultCell c;
    c.tag = r.tag;
    c.k = r.k;
    c.p = r.order;
    c.elements = r.elements;
    c.value = static_cast<double>(r.iterations);
    c.star = !r.converged;
    cells.push_back(std::move(c));
  }
  return cells;
}

std::vector<ResultCell> error_cells(const ExperimentConfig& cfg) {
  std::vector<ResultCell> cells;
  if (cfg.study == "convergence") {
    for (int p : cfg.orders) {
      for (double k : cfg.wave_numbers) {
        ConvergenceStudy st = convergence_study(k, p, cfg.elements, cfg.samples);
        for (const ConvergenceRow& row : st.rows) {
          cells.push_back({"", k, p, row.elements, row.sampled, false});
        }
      }
    }
    return cells;
  }
  if (cfg.study == "pollution") {
    auto rows = pollution_study(cfg.wave_numbers, cfg.orders, cfg.kh, cfg.samples);
    for (const PollutionRow& row : rows) {
      cells.push_back({"", row.k, row.order, row.elements, row.sampled, false});
    }
    return cells;
  }
  throw std::invalid_argument("config study produces no error cells: " +
                              cfg.study);
}

std::vector<GoldenRow> read_golden_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open reference table: " + path);
  std::string line;
  // Comment and blank lines may precede the header.
  do {
    if (!std::getline(is, line))
      throw std::runtime_error("empty reference table");
  } while (line.empty() || line[0] == '#');
  // Header names the key columns; only the order below is accepted.
  if (split_csv(line) != std::vector<std::string>{"tag", "k", "p", "elements",
                                                  "value", "tol"}) {
    throw std::runtime_error("unknown reference header in " + path);
  }
  std::vector<GoldenRow> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split_csv(line);
    if (f.size() != 6) throw std::runtime_error("malformed reference row");
    GoldenRow g;
    g.tag = f[0];
    g.k = f[1];
    g.p = f[2];
    g.elements = f[3];
    g.value = f[4];
    if (!f[5].empty()) g.tol = parse_double(f[5]);
    rows.push_back(std::move(g));
  }
  return rows;
}

namespace {

bool key_matches(const GoldenRow& g, const ResultCell& c) {
  if (!g.tag.empty() && g.tag != c.tag) return false;
  if (!g.k.empty()) {
    double gk = std::stod(g.k);
    if (std::abs(gk - c.k) > 1e-9 * std::max(1.0, std::abs(gk))) return false;
  }
  if (!g.p.empty() && std::stoi(g.p) != c.p) return false;
  if (!g.elements.empty() && std::stoi(g.elements) != c.elements) return false;
  return true;
}

std::string cell_key(const GoldenRow& g) {
  std::string key;
  if (!g.tag.empty()) key += "tag=" + g.tag + " ";
  if (!g.k.empty()) key += "k=" + g.k + " ";
  if (!g.p.empty()) key += "p=" + g.p + " ";
  if (!g.elements.empty()) key += "elements=" + g.elements + " ";
  if (!key.empty()) key.pop_back();
  return key;
}

}  // namespace

DiffReport compare_cells(const std::vector<ResultCell>& cells,
                         const std::vector<GoldenRow>& golden,
                         const std::string& mode, double tolerance) {
  if (mode != "iterations" && mode != "factor") {
    throw std::invalid_argument("unknown compare mode: " + mode);
  }
  DiffReport report;
  for (const GoldenRow& g : golden) {
    const ResultCell* hit = nullptr;
    for (const ResultCell& c : cells) {
      if (key_matches(g, c)) {
        hit = &c;
        break;
      }
    }
    DiffLine line;
    line.key = cell_key(g);
    line.expected = g.value;
    if (!hit) {
      line.actual = "(missing)";
      line.ok = false;
      line.missing = true;
      report.missing += 1;
      report.lines.push_back(std::move(line));
      continue;
    }
    double tol = std::isfinite(g.tol) ? g.tol : tolerance;
    line.actual = hit->star ? "*" : format_double(hit->value);
    if (mode == "iterations") {
      if (g.value == "*") {
        line.ok = hit->star;
      } else if (hit->star) {
        line.ok = false;
      } else {
        line.ok = std::abs(hit->value - std::stod(g.value)) <= tol;
      }
    } else {
      double gv = std::stod(g.value);
      line.ok = !hit->star && gv > 0.0 && hit->value > 0.0 &&
                std::max(hit->value / gv, gv / hit->value) <= tol;
    }
    (line.ok ? report.matched : report.mismatched) += 1;
    report.lines.push_back(std::move(line));
  }
  return report;
}

std::vector<SpectrumRun> run_spectrum_sweep(const ExperimentConfig& cfg) {
  SpectrumOptions opt;
  if (cfg.composition == "plain") {
    opt.kind = SpectrumKind::Plain;
  } else if (cfg.composition == "deflated") {
    opt.kind = SpectrumKind::Deflated;
  } else if (cfg.composition == "deflated-shifted") {
    opt.kind = SpectrumKind::DeflatedShifted;
  } else if (cfg.composition == "shifted") {
    opt.kind = SpectrumKind::Shifted;
  } else {
    throw std::invalid_argument("unknown composition: " + cfg.composition);
  }
  opt.drop = cfg.epsilon;
  opt.nu = cfg.smoothing;
  opt.omega = cfg.omega;
  opt.dense_cap = cfg.dense_cap;

  std::vector<SpectrumRun> runs;
  for (int p : cfg.orders) {
    for (double k : cfg.wave_numbers) {
      int n_el = cfg.elements.empty() ? derived_elements(k, cfg.kh, p)
                                      : cfg.elements.front();
      Problem pb = make_problem(cfg, n_el, p, k);
      DiscreteSystem sys = assemble(pb);
      if (sys.A.rows() > opt.dense_cap) {
        std::cerr << "skip spectrum p=" << p << " k=" << k
                  << ": system larger than dense cap\n";
        continue;
      }
      opt.beta2 = cfg.beta2;
      runs.push_back({k, p, operator_spectrum(sys, opt)});
    }
  }
  return runs;
}

void write_spectrum_csv(const Eigen::VectorXcd& values, std::ostream& os) {
  os << "re,im\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    os << format_double(values[i].real()) << ','
       << format_double(values[i].imag()) << "\n";
  }
}

}  // namespace helmdef
