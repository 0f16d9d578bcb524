#include "wl1/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wl1/errors.hpp"
#include "wl1/theory.hpp"

namespace wl1 {

using nlohmann::json;

namespace {

json video_json(const VideoConfig& v) {
  return json{{"format", v.format},         {"input", v.input},
              {"frames", v.frames},         {"width", v.width},
              {"height", v.height},         {"block_rows", v.block_rows},
              {"block_cols", v.block_cols}, {"m", v.m},
              {"top_fraction", v.top_fraction}, {"methods", v.methods},
              {"single_weights", v.single_weights}, {"step_tol", v.step_tol},
              {"max_iterations", v.max_iterations}};
}

json spec_json(const ExperimentSpec& s) {
  return json{{"id", s.id},
              {"n", s.n},
              {"s", s.s},
              {"sigma", s.sigma},
              {"trials", s.trials},
              {"m_grid", s.m_grid},
              {"single_weights", s.single_weights},
              {"pair_weights", s.pair_weights},
              {"sweep", s.sweep},
              {"rho", s.rho},
              {"alpha", s.alpha},
              {"epsilon_policy", s.epsilon_policy},
              {"epsilon", s.epsilon},
              {"a", s.a},
              {"tree_s", s.tree_s},
              {"prior_trials", s.prior_trials},
              {"instances", s.instances},
              {"step_tol", s.step_tol},
              {"feas_tol", s.feas_tol},
              {"max_iterations", s.max_iterations},
              {"seed", s.seed},
              {"output", s.output},
              {"video", video_json(s.video)}};
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void read_video(const json& j, VideoConfig& v) {
  take(j, "format", v.format);
  take(j, "input", v.input);
  take(j, "frames", v.frames);
  take(j, "width", v.width);
  take(j, "height", v.height);
  take(j, "block_rows", v.block_rows);
  take(j, "block_cols", v.block_cols);
  take(j, "m", v.m);
  take(j, "top_fraction", v.top_fraction);
  take(j, "methods", v.methods);
  take(j, "single_weights", v.single_weights);
  take(j, "step_tol", v.step_tol);
  take(j, "max_iterations", v.max_iterations);
}

void read_spec(const json& j, ExperimentSpec& s) {
  if (!j.is_object()) throw InputError("spec: expected a JSON object");
  static const char* known[] = {"id", "n", "s", "sigma", "trials", "m_grid", "single_weights",
                                "pair_weights", "sweep", "rho", "alpha", "epsilon_policy",
                                "epsilon", "a", "tree_s", "prior_trials", "instances", "step_tol",
                                "feas_tol", "max_iterations", "seed", "output", "video"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      throw InputError("spec: unknown key '" + key + "'");
    }
  }
  take(j, "id", s.id);
  take(j, "n", s.n);
  take(j, "s", s.s);
  take(j, "sigma", s.sigma);
  take(j, "trials", s.trials);
  take(j, "m_grid", s.m_grid);
  take(j, "single_weights", s.single_weights);
  take(j, "pair_weights", s.pair_weights);
  take(j, "sweep", s.sweep);
  take(j, "rho", s.rho);
  take(j, "alpha", s.alpha);
  take(j, "epsilon_policy", s.epsilon_policy);
  take(j, "epsilon", s.epsilon);
  take(j, "a", s.a);
  take(j, "tree_s", s.tree_s);
  take(j, "prior_trials", s.prior_trials);
  take(j, "instances", s.instances);
  take(j, "step_tol", s.step_tol);
  take(j, "feas_tol", s.feas_tol);
  take(j, "max_iterations", s.max_iterations);
  take(j, "seed", s.seed);
  take(j, "output", s.output);
  if (j.contains("video")) read_video(j.at("video"), s.video);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// "a.b = v" lines into a nested object
json parse_key_values(std::istream& is) {
  json out = json::object();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    json* target = &out;
    std::string rest = key;
    for (auto dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
      target = &(*target)[rest.substr(0, dot)];
      rest = rest.substr(dot + 1);
    }
    (*target)[rest] = value;
  }
  return out;
}

}  // namespace

ExperimentSpec ExperimentSpec::defaults(const std::string& id) {
  ExperimentSpec s;
  s.id = id;
  if (id == "fig1a" || id == "fig1b") {
    s.alpha = 1.0;
    s.rho = 1.0;
    s.pair_weights = id == "fig1a" ? std::vector<double>{0.5, 0.25} : std::vector<double>{0.5, 0.4, 0.25};
  } else if (id == "fig2a") {
    s.alpha = 1.0;
    s.sweep = {0.25, 0.5, 0.75};
  } else if (id == "fig2b") {
    s.alpha = 0.5;
    s.sweep = {0.0, 0.25, 0.5, 0.75, 1.0};
  } else if (id == "power" || id == "tree") {
    s.single_weights = {0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
    s.m_grid = id == "power" ? std::vector<std::size_t>{8, 12, 16, 20, 24, 32, 48}
                             : std::vector<std::size_t>{32, 48, 64, 80, 96, 112, 128};
  } else if (id == "video") {
    s.trials = 1;
  } else if (id == "tiny-theorem") {
    s.sigma = 0.01;
    s.max_iterations = 200000;
  } else {
    throw InputError("unknown experiment id '" + id + "'");
  }
  return s;
}

SolverConfig ExperimentSpec::solver_config() const {
  SolverConfig c;
  c.step_tol = step_tol;
  c.feas_tol = feas_tol;
  c.max_iterations = max_iterations;
  return c;
}

std::string to_json(const ExperimentSpec& spec) { return spec_json(spec).dump(2); }

ExperimentSpec spec_from_json(const std::string& text, ExperimentSpec base) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("spec: malformed JSON");
  try {
    read_spec(j, base);
  } catch (const json::exception& e) {
    throw InputError(std::string("spec: ") + e.what());
  }
  return base;
}

ExperimentSpec load_spec_file(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return spec_from_json(text, std::move(base));
  std::istringstream lines(text);
  json j = parse_key_values(lines);
  try {
    read_spec(j, base);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return base;
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
  json j = spec_json(spec);
  j.erase("output");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(const ExperimentSpec& spec, std::vector<std::string> columns)
    : output_(spec.output), columns_(std::move(columns)) {
  std::ostringstream c;
  c << "# experiment=" << spec.id << " spec_hash=" << std::hex << spec_hash(spec) << std::dec
    << " seed=" << spec.seed;
  comment_ = c.str();
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw ContractViolation("CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw ContractViolation("CsvTable: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

double CsvTable::value(std::size_t row, const std::string& name) const {
  const std::string& cell = rows_.at(row).at(column(name));
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  return std::stod(cell);
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << quote(cells[i]);
  }
  os << "\r\n";
}

}  // namespace

void CsvTable::write(std::ostream& os) const {
  os << comment_ << "\r\n";
  write_line(os, columns_);
  for (const auto& r : rows_) write_line(os, r);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

void CsvTable::save() const {
  if (output_.empty()) return;
  std::ofstream out(output_, std::ios::binary);
  if (!out) throw InputError("cannot write '" + output_ + "'");
  write(out);
}

CsvTable run_fig1(const ExperimentSpec& spec) {
  const bool three = spec.id == "fig1b";
  if (spec.id != "fig1a" && !three) throw ContractViolation("run_fig1: id must be fig1a or fig1b");
  const std::size_t N = three ? 3 : 2;
  if (spec.pair_weights.size() != N) {
    throw ContractViolation("run_fig1: need " + std::to_string(N) + " weights");
  }
  const auto& w = spec.pair_weights;
  const double alpha = spec.alpha;
  const double rho = spec.rho;

  std::vector<std::string> cols = {"rho1"};
  if (three) cols.push_back("rho2");
  for (double wi : w) cols.push_back("delta_b_w" + format_number(wi));
  cols.insert(cols.end(), {"delta_k", "delta_gamma", "k", "gamma"});
  CsvTable table(spec, cols);

  std::vector<double> single;
  for (double wi : w) single.push_back(theory::delta_threshold(theory::b_constant(wi, rho, alpha), spec.a));

  constexpr int kSteps = 100;
  for (int i = 0; i <= kSteps; ++i) {
    for (int j = 0; j <= (three ? kSteps - i : 0); ++j) {
      theory::TheoryParams p;
      p.a = spec.a;
      p.weights = w;
      p.alphas.assign(N, alpha);
      const double r1 = rho * i / kSteps;
      if (three) {
        const double r2 = rho * j / kSteps;
        p.rhos = {r1, r2, std::max(0.0, rho - r1 - r2)};
      } else {
        p.rhos = {r1, std::max(0.0, rho - r1)};
      }
      const double k = theory::k_n(p);
      const double g = theory::gamma_constant(p);
      std::vector<double> row = {r1};
      if (three) row.push_back(p.rhos[1]);
      row.insert(row.end(), single.begin(), single.end());
      row.insert(row.end(), {theory::delta_threshold(k, spec.a), theory::delta_threshold(g, spec.a), k, g});
      table.add_row(row);
    }
  }
  return table;
}

}  // namespace wl1
