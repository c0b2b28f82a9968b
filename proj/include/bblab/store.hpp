#pragma once
// Append-only campaign results on disk: one tab-separated line per
// classified machine, plus a small sidecar with per-query checkpoints.
// Loading tolerates exactly one kind of damage — a final line cut short by
// a crash mid-append, which is dropped and truncated away. Anything else
// that fails to parse is treated as corruption and refused, never skipped.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bblab {

// Key under which a query's records are filed: "s,m,n" (s may be empty).
std::string query_key(std::string_view s, int order, int states);

struct StoreRecord {
  enum class Status { Halt, NonHalt, Unknown, Unresolved };
  std::string key;
  std::string machine;
  Status status = Status::Unknown;
  std::uint64_t steps = 0;  // halting step count; 0 otherwise
  std::string stage;        // pipeline stage that settled it ("none" if none)
  std::string blob;         // replayable proof text or query detail, "-" if none

  friend bool operator==(const StoreRecord&, const StoreRecord&) = default;
};

std::string format_record(const StoreRecord& r);
// Throws std::runtime_error on any malformed field.
StoreRecord parse_record(std::string_view line);

// Progress checkpoint for one query, stored in "<path>.campaign".
struct Campaign {
  std::string key;
  std::uint64_t cursor = 0;     // machines already recorded
  std::uint64_t max_steps = 0;  // running maximum over halts
  std::string champion;         // "-" until a halt is seen

  friend bool operator==(const Campaign&, const Campaign&) = default;
};

class ResultsStore {
 public:
  // Opens or creates the file, loading every record. A final line without
  // its newline is a torn append: it is dropped and the file truncated to
  // the last healthy record. A malformed line anywhere else throws
  // std::runtime_error naming the line.
  explicit ResultsStore(std::string path);

  const std::string& path() const { return path_; }
  const std::vector<StoreRecord>& records() const { return records_; }

  // Appends and flushes one record.
  void append(const StoreRecord& r);

  // Number of records filed under the key — which, for a deterministic
  // enumeration, is exactly the resume cursor.
  std::uint64_t count_for(std::string_view key) const;

  // Rewrites the sidecar with this checkpoint (one entry per key).
  void checkpoint(const Campaign& c);
  std::optional<Campaign> campaign(std::string_view key) const;

 private:
  std::string path_;
  std::vector<StoreRecord> records_;
  std::map<std::string, Campaign> campaigns_;

  void load();
  void load_campaigns();
  void save_campaigns() const;
};

}  // namespace bblab
