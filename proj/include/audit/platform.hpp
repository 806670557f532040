#pragma once

#include <memory>
#include <string>

#include "audit/model.hpp"

namespace audit {

// One logged-in sitting of a single bot. Single-writer over the BotState it
// was opened with.
class PlatformSession {
 public:
  virtual ~PlatformSession() = default;

  virtual Video next_video() = 0;

  // Feedback for the most recently served video; anything else is a
  // SequencingError.
  virtual void register_feedback(const Video& video, double watched_s, bool liked,
                                 bool followed) = 0;

  // Run boundary: persists the bot state and advances its epoch.
  virtual void close() = 0;
};

class Platform {
 public:
  virtual ~Platform() = default;

  virtual std::unique_ptr<PlatformSession> open_session(BotState& state,
                                                        const std::string& location) = 0;

  // Upper bound on distinct videos a single bot can be served.
  virtual std::size_t capacity() const = 0;
};

}  // namespace audit
