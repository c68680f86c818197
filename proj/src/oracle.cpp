#include "lamcat/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "lamcat/errors.hpp"

namespace lamcat {

namespace {

void init_history(MergeHistory& h, int n) {
  h.n = n;
  h.block_members.resize(static_cast<std::size_t>(n));
  h.leaf_paths.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    h.block_members[static_cast<std::size_t>(i - 1)] = {i};
    h.leaf_paths[static_cast<std::size_t>(i - 1)] = {1};
  }
}

int merge_blocks(MergeHistory& h, std::vector<int> merged, double time) {
  std::sort(merged.begin(), merged.end());
  std::vector<int> members;
  for (const int id : merged) {
    if (id < 0 || static_cast<std::size_t>(id) >= h.block_members.size()) {
      throw ConsistencyError("history: merge refers to unknown block id " + std::to_string(id));
    }
    const auto& m = h.block_members[static_cast<std::size_t>(id)];
    members.insert(members.end(), m.begin(), m.end());
  }
  std::sort(members.begin(), members.end());
  const auto size = static_cast<int>(members.size());
  for (const int i : members) h.leaf_paths[static_cast<std::size_t>(i - 1)].push_back(size);
  const auto id = static_cast<int>(h.block_members.size());
  h.block_members.push_back(std::move(members));
  h.events.push_back({time, std::move(merged), id});
  return id;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

MergeHistory run_oracle(const MergerKernel& kernel, int n, RandomStream& rng, int cap) {
  if (n < 2) throw DomainError("run_oracle: n must be >= 2");
  if (n > cap) throw DomainError("run_oracle: n exceeds the oracle cap of " + std::to_string(cap));
  MergeHistory h;
  init_history(h, n);
  // Alive block ids ordered by least member; ids of singletons already are.
  std::vector<int> alive(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) alive[static_cast<std::size_t>(i)] = i;
  double time = 0.0;
  std::vector<std::size_t> positions;
  while (alive.size() > 1) {
    const auto b = static_cast<std::int64_t>(alive.size());
    time += rng.exponential(kernel.total_rate(b));
    const auto k = kernel.sample_size(b, rng.uniform());
    positions.resize(alive.size());
    for (std::size_t j = 0; j < positions.size(); ++j) positions[j] = j;
    std::vector<int> merged;
    for (std::int64_t j = 0; j < k; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const auto pick = jj + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(b - j)));
      std::swap(positions[jj], positions[pick]);
      merged.push_back(alive[positions[jj]]);
    }
    const int id = merge_blocks(h, merged, time);
    std::erase_if(alive, [&](int a) { return std::find(merged.begin(), merged.end(), a) != merged.end(); });
    const int least = h.block_members[static_cast<std::size_t>(id)].front();
    const auto at = std::find_if(alive.begin(), alive.end(), [&](int a) {
      return h.block_members[static_cast<std::size_t>(a)].front() > least;
    });
    alive.insert(at, id);
  }
  return h;
}

MergeHistory history_from_merges(int n, const std::vector<std::vector<int>>& merges,
                                 const std::vector<double>& times) {
  if (n < 1) throw DomainError("history_from_merges: n must be positive");
  MergeHistory h;
  init_history(h, n);
  for (std::size_t e = 0; e < merges.size(); ++e) {
    const double t = e < times.size() ? times[e] : static_cast<double>(e + 1);
    merge_blocks(h, merges[e], t);
  }
  validate_history(h);
  return h;
}

std::int64_t caterpillars_from_history(const MergeHistory& history, int r) {
  if (r < 1) throw DomainError("caterpillars_from_history: r must be >= 1");
  std::int64_t count = 0;
  for (const auto& block : history.block_members) {
    if (static_cast<int>(block.size()) != r) continue;
    const bool caterpillar = std::any_of(block.begin(), block.end(), [&](int i) {
      const auto& path = history.leaf_paths[static_cast<std::size_t>(i - 1)];
      for (std::size_t s = 0; s < path.size(); ++s) {
        if (s > 0 && path[s] - path[s - 1] != 1) return false;
        if (path[s] == r) return true;
      }
      return false;
    });
    if (caterpillar) ++count;
  }
  return count;
}

std::vector<int> definition_flags(const MergeHistory& history) {
  std::vector<int> flags(history.block_members.size(), 0);
  for (std::size_t id = 0; id < history.block_members.size(); ++id) {
    const auto& block = history.block_members[id];
    const auto r = static_cast<int>(block.size());
    for (const int i : block) {
      const auto& path = history.leaf_paths[static_cast<std::size_t>(i - 1)];
      bool ok = false;
      for (std::size_t s = 0; s < path.size(); ++s) {
        if (s > 0 && path[s] - path[s - 1] != 1) break;
        if (path[s] == r) {
          ok = true;
          break;
        }
      }
      if (ok) {
        flags[id] = r;
        break;
      }
    }
  }
  return flags;
}

std::vector<int> census_rule_flags(const MergeHistory& history) {
  std::vector<int> flags(history.block_members.size(), 0);
  for (int i = 0; i < history.n; ++i) flags[static_cast<std::size_t>(i)] = 1;
  for (const auto& e : history.events) {
    if (e.merged.size() != 2) continue;
    const int a = flags[static_cast<std::size_t>(e.merged[0])];
    const int b = flags[static_cast<std::size_t>(e.merged[1])];
    if (a == 1 && b >= 1) flags[static_cast<std::size_t>(e.new_block)] = b + 1;
    else if (b == 1 && a >= 1) flags[static_cast<std::size_t>(e.new_block)] = a + 1;
  }
  return flags;
}

CaterpillarCensus replay_census(const MergeHistory& history, int r_max) {
  auto census = new_census(history.n, r_max);
  // Category of every block id in census layout (0 = other).
  std::vector<int> category(history.block_members.size(), 0);
  for (int i = 0; i < history.n; ++i) category[static_cast<std::size_t>(i)] = 1;
  double previous_time = 0.0;
  MergerEvent event;
  for (const auto& e : history.events) {
    event.k = static_cast<std::int64_t>(e.merged.size());
    event.composition.assign(static_cast<std::size_t>(r_max) + 1, 0);
    for (const int id : e.merged) ++event.composition[static_cast<std::size_t>(category[static_cast<std::size_t>(id)])];
    event.created = caterpillar_created(event.composition, event.k);
    event.holding_time = e.time - previous_time;
    previous_time = e.time;
    apply_merger(census, event);
    category[static_cast<std::size_t>(e.new_block)] =
        (event.created && *event.created <= r_max) ? *event.created : 0;
  }
  return census;
}

void validate_history(const MergeHistory& h) {
  const auto n = static_cast<std::size_t>(h.n);
  if (h.block_members.size() != n + h.events.size()) {
    throw ConsistencyError("history: block count does not match events");
  }
  std::vector<bool> merged(h.block_members.size(), false);
  std::set<int> alive;
  for (int i = 0; i < h.n; ++i) alive.insert(i);
  double last_time = 0.0;
  for (std::size_t e = 0; e < h.events.size(); ++e) {
    const auto& ev = h.events[e];
    if (ev.merged.size() < 2) throw ConsistencyError("history: event merges fewer than two blocks");
    if (ev.new_block != static_cast<int>(n + e)) throw ConsistencyError("history: unexpected new block id");
    if (ev.time < last_time) throw ConsistencyError("history: event times decrease");
    last_time = ev.time;
    std::size_t size = 0;
    for (const int id : ev.merged) {
      if (id < 0 || id >= ev.new_block || merged[static_cast<std::size_t>(id)] || !alive.count(id)) {
        throw ConsistencyError("history: block merged twice or not alive");
      }
      merged[static_cast<std::size_t>(id)] = true;
      alive.erase(id);
      size += h.block_members[static_cast<std::size_t>(id)].size();
    }
    alive.insert(ev.new_block);
    if (h.block_members[static_cast<std::size_t>(ev.new_block)].size() != size) {
      throw ConsistencyError("history: merged block has the wrong size");
    }
    // Alive blocks partition {1..n}.
    std::vector<int> seen;
    for (const int id : alive) {
      const auto& m = h.block_members[static_cast<std::size_t>(id)];
      seen.insert(seen.end(), m.begin(), m.end());
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i] != static_cast<int>(i) + 1 || seen.size() != n) {
        throw ConsistencyError("history: alive blocks do not partition the sample");
      }
    }
  }
  for (int i = 1; i <= h.n; ++i) {
    const auto& path = h.leaf_paths[static_cast<std::size_t>(i - 1)];
    if (path.empty() || path.front() != 1) throw ConsistencyError("history: leaf path must start at 1");
    for (std::size_t s = 1; s < path.size(); ++s) {
      if (path[s] <= path[s - 1]) throw ConsistencyError("history: leaf path not increasing");
    }
    int final_size = 0;
    for (const int id : alive) {
      const auto& m = h.block_members[static_cast<std::size_t>(id)];
      if (std::binary_search(m.begin(), m.end(), i)) final_size = static_cast<int>(m.size());
    }
    if (path.back() != final_size) throw ConsistencyError("history: leaf path ends at the wrong size");
  }
}

MergeHistory rescale_times(MergeHistory history, double factor) {
  if (!(factor > 0.0)) throw DomainError("rescale_times: factor must be positive");
  for (auto& e : history.events) e.time *= factor;
  return history;
}

void write_history(std::ostream& out, const MergeHistory& h) {
  out << "HISTORY n=" << h.n << '\n';
  char time_buf[32];
  for (const auto& e : h.events) {
    std::snprintf(time_buf, sizeof time_buf, "%.17g", e.time);
    out << "EVENT " << time_buf << ' ';
    for (std::size_t j = 0; j < e.merged.size(); ++j) out << (j ? "," : "") << e.merged[j];
    out << " -> " << e.new_block << '\n';
  }
  out << "MEMBERS\n";
  for (std::size_t id = 0; id < h.block_members.size(); ++id) {
    out << id << ' ';
    const auto& m = h.block_members[id];
    for (std::size_t j = 0; j < m.size(); ++j) out << (j ? "," : "") << m[j];
    out << '\n';
  }
}

MergeHistory read_history(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("HISTORY n=", 0) != 0) {
    throw DomainError("read_history: missing HISTORY header");
  }
  const int n = std::stoi(line.substr(10));
  std::vector<std::vector<int>> merges;
  std::vector<double> times;
  std::vector<std::vector<int>> members;
  bool in_members = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line == "MEMBERS") {
      in_members = true;
    } else if (!in_members && line.rfind("EVENT ", 0) == 0) {
      std::string tag, time, ids, arrow;
      int new_id = 0;
      fields >> tag >> time >> ids >> arrow >> new_id;
      if (arrow != "->") throw DomainError("read_history: malformed EVENT line");
      times.push_back(std::stod(time));
      merges.push_back(parse_int_list(ids));
      if (new_id != n + static_cast<int>(merges.size()) - 1) {
        throw DomainError("read_history: new block ids must be consecutive");
      }
    } else if (in_members) {
      int id = 0;
      std::string list;
      fields >> id >> list;
      members.push_back(parse_int_list(list));
    } else {
      throw DomainError("read_history: unexpected line '" + line + "'");
    }
  }
  auto h = history_from_merges(n, merges, times);
  if (!members.empty() && members != h.block_members) {
    throw DomainError("read_history: MEMBERS section disagrees with the events");
  }
  return h;
}

}  // namespace lamcat
