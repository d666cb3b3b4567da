#pragma once

// Per-entity timelines over the episodic store: event indexing with stable
// per-entity sequence numbers, plus when/order/duration/extremum queries and
// the event matcher behind the temporal retrieval signal.

#include <optional>
#include <string>
#include <vector>

#include "substrate.hpp"

namespace bmam {
namespace storyarc {

// One event per (trace, entity); re-indexing the same trace is a no-op.
// After inserting, sequence numbers for each touched entity are renumbered
// 1..n following (timestamp order, then arrival) so they always agree with
// timestamp order regardless of ingest order. Returns ids of new events.
std::vector<MemoryId> index_event(MemoryStore& store, const EpisodicTrace& trace);

struct WhenResult {
  Timestamp at;
  TimelineEvent event;
};

// Best event on the entity's timeline sharing >= 1 token with the pattern;
// events with unknown timestamps never answer. Ties: more pattern overlap,
// then later timestamp, then higher seq.
std::optional<WhenResult> query_when(const MemoryStore& store, const std::string& entity,
                                     const std::string& pattern);

// Relation between the two matched events' timestamps at their coarser
// granularity; Unknown when either side has no match.
TemporalRelation query_order(const MemoryStore& store, const std::string& entity_a,
                             const std::string& pattern_a, const std::string& entity_b,
                             const std::string& pattern_b);

// Absolute day gap between the two matched events, using midpoint dates for
// coarse timestamps (year -> Jul 1, month -> the 15th).
std::optional<int64_t> query_duration(const MemoryStore& store, const std::string& entity_a,
                                      const std::string& pattern_a, const std::string& entity_b,
                                      const std::string& pattern_b);

enum class Extremum { First, Last };

// Earliest/latest known-timestamp event for the entity, optionally filtered
// to events sharing >= 1 token with the pattern.
std::optional<TimelineEvent> query_extremum(const MemoryStore& store, const std::string& entity,
                                            Extremum which, const std::string& pattern = "");

struct TemporalAnswer {
  MemoryId trace_ref;
  std::string entity;
  Timestamp at;
  std::string description;
  double score = 0.0;
};

// Ranked timeline evidence for a query. Plain matches score by distinct
// token overlap. When the query carries a departure cue (leave/quit/...),
// transition matches pair the last event of a queried entity with the
// earliest not-earlier event on another entity's timeline and score 2 +
// overlap, so the destination outranks the thing being left. One answer per
// trace (best score kept); ordered score desc, later timestamp first, id asc.
std::vector<TemporalAnswer> match_events(const MemoryStore& store, const std::string& query,
                                         const std::vector<std::string>& query_entities);

}  // namespace storyarc
}  // namespace bmam
