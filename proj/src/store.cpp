#include "bblab/store.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bblab {

namespace {

const char* status_name(StoreRecord::Status s) {
  switch (s) {
    case StoreRecord::Status::Halt:
      return "HALT";
    case StoreRecord::Status::NonHalt:
      return "NONHALT";
    case StoreRecord::Status::Unknown:
      return "UNKNOWN";
    case StoreRecord::Status::Unresolved:
      return "UNRESOLVED";
  }
  throw std::logic_error("unhandled status");
}

std::optional<StoreRecord::Status> status_from(std::string_view name) {
  if (name == "HALT") return StoreRecord::Status::Halt;
  if (name == "NONHALT") return StoreRecord::Status::NonHalt;
  if (name == "UNKNOWN") return StoreRecord::Status::Unknown;
  if (name == "UNRESOLVED") return StoreRecord::Status::Unresolved;
  return std::nullopt;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  while (true) {
    const std::size_t tab = line.find('\t');
    out.push_back(std::string(line.substr(0, tab)));
    if (tab == std::string_view::npos) break;
    line = line.substr(tab + 1);
  }
  return out;
}

bool parse_count(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s.size() > 19) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

}  // namespace

std::string query_key(std::string_view s, int order, int states) {
  return std::string(s) + "," + std::to_string(order) + "," +
         std::to_string(states);
}

std::string format_record(const StoreRecord& r) {
  return r.key + "\t" + r.machine + "\t" + status_name(r.status) + "\t" +
         std::to_string(r.steps) + "\t" + r.stage + "\t" + r.blob;
}

StoreRecord parse_record(std::string_view line) {
  std::vector<std::string> f = split_tabs(line);
  if (f.size() != 6)
    throw std::runtime_error("record does not have six fields");
  StoreRecord r;
  r.key = std::move(f[0]);
  r.machine = std::move(f[1]);
  auto status = status_from(f[2]);
  if (!status) throw std::runtime_error("unknown record status '" + f[2] + "'");
  r.status = *status;
  if (!parse_count(f[3], r.steps))
    throw std::runtime_error("bad step count '" + f[3] + "'");
  r.stage = std::move(f[4]);
  r.blob = std::move(f[5]);
  if (r.key.empty() || r.machine.empty() || r.stage.empty() || r.blob.empty())
    throw std::runtime_error("record has an empty field");
  return r;
}

ResultsStore::ResultsStore(std::string path) : path_(std::move(path)) {
  load();
  load_campaigns();
}

void ResultsStore::load() {
  std::ifstream in(path_, std::ios::binary);
  if (!in.is_open()) return;  // fresh store
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  in.close();

  std::size_t at = 0;
  std::size_t healthy_end = 0;
  std::size_t line_number = 0;
  while (at < content.size()) {
    const std::size_t nl = content.find('\n', at);
    ++line_number;
    if (nl == std::string::npos) {
      // Torn final append: drop it and truncate the file back to the last
      // complete record.
      std::ofstream out(path_, std::ios::binary | std::ios::trunc);
      out.write(content.data(),
                static_cast<std::streamsize>(healthy_end));
      return;
    }
    try {
      records_.push_back(parse_record(
          std::string_view(content).substr(at, nl - at)));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(path_ + " line " +
                               std::to_string(line_number) +
                               " is corrupt: " + e.what());
    }
    at = nl + 1;
    healthy_end = at;
  }
}

void ResultsStore::append(const StoreRecord& r) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out.is_open())
    throw std::runtime_error("cannot open " + path_ + " for append");
  out << format_record(r) << "\n";
  out.flush();
  if (!out) throw std::runtime_error("write to " + path_ + " failed");
  records_.push_back(r);
}

std::uint64_t ResultsStore::count_for(std::string_view key) const {
  std::uint64_t n = 0;
  for (const StoreRecord& r : records_)
    if (r.key == key) ++n;
  return n;
}

void ResultsStore::checkpoint(const Campaign& c) {
  campaigns_[c.key] = c;
  save_campaigns();
}

std::optional<Campaign> ResultsStore::campaign(std::string_view key) const {
  auto it = campaigns_.find(std::string(key));
  if (it == campaigns_.end()) return std::nullopt;
  return it->second;
}

void ResultsStore::load_campaigns() {
  std::ifstream in(path_ + ".campaign", std::ios::binary);
  if (!in.is_open()) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_tabs(line);
    Campaign c;
    if (f.size() != 4 || f[0].empty() || !parse_count(f[1], c.cursor) ||
        !parse_count(f[2], c.max_steps) || f[3].empty())
      throw std::runtime_error(path_ + ".campaign is corrupt");
    c.key = f[0];
    c.champion = f[3];
    campaigns_[c.key] = c;
  }
}

void ResultsStore::save_campaigns() const {
  const std::string tmp = path_ + ".campaign.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.is_open())
      throw std::runtime_error("cannot write " + tmp);
    for (const auto& [key, c] : campaigns_)
      out << key << "\t" << c.cursor << "\t" << c.max_steps << "\t"
          << (c.champion.empty() ? "-" : c.champion) << "\n";
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), (path_ + ".campaign").c_str()) != 0)
    throw std::runtime_error("cannot replace " + path_ + ".campaign");
}

}  // namespace bblab
