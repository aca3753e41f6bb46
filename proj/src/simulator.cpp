#include "equipart/simulator.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "equipart/error.hpp"

namespace equipart {

namespace {

constexpr std::size_t kMaxRestarts = 1'000'000;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::size_t parse_index(const std::string& s, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') {
    throw ParseError(line_no, "expected a non-negative integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

bool complete_from_prior(PlacementChain& chain, Rng& rng) {
  std::vector<std::size_t> w(chain.problem().partition_count());
  while (!chain.complete()) {
    const auto total = chain.weights(w);
    if (total == 0) return false;
    chain.place(static_cast<Label>(sample_weighted(rng, w, total)));
  }
  return true;
}

Assignment generate_ground_truth(const Problem& problem, Rng& rng) {
  PlacementChain chain(problem);
  for (std::size_t attempt = 0; attempt < kMaxRestarts; ++attempt) {
    chain.reset();
    if (complete_from_prior(chain, rng)) {
      return Assignment(std::vector<Label>(chain.labels().begin(), chain.labels().end()));
    }
  }
  throw Error("placement prior kept dead-ending; constraints are too tight for rejection sampling");
}

Assignment generate_ground_truth(const Problem& problem, std::uint64_t seed) {
  Rng rng(seed);
  return generate_ground_truth(problem, rng);
}

Environment::Environment(const Problem& problem, Assignment truth, double p, std::uint64_t seed)
    : truth_(std::move(truth)), p_(p), seed_(seed), rng_(seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("convergent-request probability must lie in [0, 1]");
  if (!problem.satisfied_by(truth_)) throw DomainError("ground truth breaks the problem's rules");
  const auto n = truth_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      (truth_[i] == truth_[j] ? convergent_ : divergent_).emplace_back(i, j);
    }
  }
  if (convergent_.empty() || divergent_.empty()) {
    throw DegenerateEnvironment("environment " + problem.spec().name() +
                                " has no convergent or no divergent pairs");
  }
}

ObjectPair Environment::sample_request() {
  if (uniform01(rng_) < p_) return convergent_[uniform_index(rng_, convergent_.size())];
  return divergent_[uniform_index(rng_, divergent_.size())];
}

RequestStream stream(Environment& env, std::size_t requests) {
  RequestStream s{{}, PairCounts(env.object_count())};
  s.requests.reserve(requests);
  for (std::size_t t = 0; t < requests; ++t) {
    const auto pair = env.sample_request();
    s.requests.push_back(pair);
    s.counts.add(pair);
  }
  return s;
}

PairCounts counts_from(std::span<const ObjectPair> requests, std::size_t objects) {
  PairCounts counts(objects);
  for (const auto& pair : requests) counts.add(pair);
  return counts;
}

void write_stream_csv(std::ostream& out, std::span<const ObjectPair> requests) {
  out << "t,i,j\n";
  for (std::size_t t = 0; t < requests.size(); ++t) {
    out << (t + 1) << ',' << requests[t].first << ',' << requests[t].second << '\n';
  }
}

std::vector<ObjectPair> read_stream_csv(std::istream& in) {
  std::vector<ObjectPair> requests;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || strip_cr(line) != "t,i,j") throw ParseError(1, "expected header 't,i,j'");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw ParseError(line_no, "expected three columns");
    const auto t = parse_index(cells[0], line_no);
    if (t != requests.size() + 1) throw ParseError(line_no, "request numbers must run 1, 2, 3, ...");
    const auto i = parse_index(cells[1], line_no);
    const auto j = parse_index(cells[2], line_no);
    if (i == j) throw ParseError(line_no, "request pairs an object with itself");
    requests.emplace_back(i, j);
  }
  return requests;
}

void write_counts_csv(std::ostream& out, const PairCounts& counts) {
  out << "i,j,count\n";
  for (const auto& o : counts.nonzero()) out << o.pair.first << ',' << o.pair.second << ',' << o.count << '\n';
}

PairCounts read_counts_csv(std::istream& in, std::size_t objects) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "i,j,count") throw ParseError(1, "expected header 'i,j,count'");
  PairCounts counts(objects);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw ParseError(line_no, "expected three columns");
    const auto i = parse_index(cells[0], line_no);
    const auto j = parse_index(cells[1], line_no);
    const auto n = parse_index(cells[2], line_no);
    if (i == j) throw ParseError(line_no, "count pairs an object with itself");
    if (n > 0xffffffffULL) throw ParseError(line_no, "count too large");
    counts.add(i, j, static_cast<std::uint32_t>(n));
  }
  return counts;
}

void write_assignment_csv(std::ostream& out, const Assignment& a) {
  out << "object,partition\n";
  for (std::size_t i = 0; i < a.size(); ++i) out << i << ',' << a[i] << '\n';
}

Assignment read_assignment_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "object,partition") {
    throw ParseError(1, "expected header 'object,partition'");
  }
  std::vector<Label> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw ParseError(line_no, "expected two columns");
    if (parse_index(cells[0], line_no) != labels.size()) throw ParseError(line_no, "objects must be listed in order");
    labels.push_back(static_cast<Label>(parse_index(cells[1], line_no)));
  }
  return Assignment(std::move(labels));
}

std::uint64_t stream_hash(std::span<const ObjectPair> requests) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : requests) {
    mix(p.first);
    mix(p.second);
  }
  return h;
}

}  // namespace equipart
