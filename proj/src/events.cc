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

#include "eegpipe/events.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace eegpipe {

namespace {

std::string ShortestDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

absl::StatusOr<EventList> EventList::Create(std::vector<Event> events,
                                            double total_duration) {
  if (!(total_duration >= 0.0) || !std::isfinite(total_duration)) {
    return absl::InvalidArgumentError("total duration must be >= 0");
  }
  for (const Event& e : events) {
    if (!std::isfinite(e.start) || !std::isfinite(e.stop)) {
      return absl::InvalidArgumentError("non-finite event bound");
    }
    if (e.stop <= e.start) {
      return absl::InvalidArgumentError(
          absl::StrCat("inverted interval (", e.start, ", ", e.stop, ")"));
    }
    if (e.start < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("event starts before 0: ", e.start));
    }
    if (e.stop > total_duration) {
      return absl::InvalidArgumentError(absl::StrCat(
          "event stop ", e.stop, " exceeds total duration ", total_duration));
    }
  }
  std::stable_sort(
      events.begin(), events.end(),
      [](const Event& a, const Event& b) { return a.start < b.start; });
  EventList list;
  list.events_ = std::move(events);
  list.total_duration_ = total_duration;
  return list;
}

EventList EventList::Empty(double total_duration) {
  EventList list;
  list.total_duration_ = total_duration;
  return list;
}

absl::StatusOr<EventList> ReadAnnotations(absl::string_view text,
                                          double total_duration,
                                          absl::string_view keep_label) {
  std::vector<Event> events;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    if (cols.size() != 3) {
      return absl::InvalidArgumentError(absl::StrCat(
          "malformed line ", line_no, ": expected start,stop,label"));
    }
    Event e;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(cols[0]), &e.start) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cols[1]), &e.stop)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed line ", line_no, ": non-numeric bound"));
    }
    e.label = std::string(absl::StripAsciiWhitespace(cols[2]));
    if (e.stop <= e.start) {
      return absl::InvalidArgumentError(
          absl::StrCat("inverted interval on line ", line_no));
    }
    if (e.stop > total_duration) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": stop ", e.stop,
                       " exceeds total duration ", total_duration));
    }
    if (keep_label.empty() || e.label == keep_label) {
      events.push_back(std::move(e));
    }
  }
  return EventList::Create(std::move(events), total_duration);
}

std::string FormatAnnotations(const EventList& events) {
  std::string out;
  for (const Event& e : events.events()) {
    absl::StrAppend(&out, ShortestDouble(e.start), ",", ShortestDouble(e.stop),
                    ",", e.label, "\n");
  }
  return out;
}

}  // namespace eegpipe
