// Copyright 2026 The eegpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EEGPIPE_EVENTS_H_
#define EEGPIPE_EVENTS_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace eegpipe {

inline constexpr char kSeizureLabel[] = "seiz";

struct Event {
  double start = 0.0;  // seconds
  double stop = 0.0;
  std::string label;
};

// Labeled intervals sorted by start time, each satisfying
// 0 <= start < stop <= total_duration. Immutable once built.
class EventList {
 public:
  static absl::StatusOr<EventList> Create(std::vector<Event> events,
                                          double total_duration);
  static EventList Empty(double total_duration);

  const std::vector<Event>& events() const { return events_; }
  size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  double total_duration() const { return total_duration_; }

 private:
  EventList() = default;

  std::vector<Event> events_;
  double total_duration_ = 0.0;
};

// Parses "start,stop,label" lines. Blank lines and lines starting with '#'
// are skipped. Every line is validated; only lines whose label equals
// `keep_label` are retained (all lines when `keep_label` is empty).
absl::StatusOr<EventList> ReadAnnotations(
    absl::string_view text, double total_duration,
    absl::string_view keep_label = kSeizureLabel);

std::string FormatAnnotations(const EventList& events);

}  // namespace eegpipe

#endif  // EEGPIPE_EVENTS_H_
