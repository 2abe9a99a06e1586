/*
 * Copyright 2026 The HiGen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HIGEN_ERROR_H_
#define HIGEN_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>

namespace higen {

// Base of every error raised by the library. `kind()` is a stable short tag
// used in persisted failure records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& m) : Error("argument", m) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error("domain", m) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& m) : Error("numeric", m) {}
};

class DatasetError : public Error {
 public:
  DatasetError(const std::string& m, std::optional<size_t> line = std::nullopt)
      : Error("dataset", line ? "line " + std::to_string(*line) + ": " + m : m),
        line_(line) {}
  std::optional<size_t> line() const { return line_; }

 private:
  std::optional<size_t> line_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("config", m) {}
};

class RenderError : public Error {
 public:
  RenderError(const std::string& placeholder)
      : Error("render", "missing value for placeholder {" + placeholder + "}"),
        placeholder_(placeholder) {}
  const std::string& placeholder() const { return placeholder_; }

 private:
  std::string placeholder_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error("parse", m) {}
};

// Non-retryable HTTP status from the backend.
class EndpointError : public Error {
 public:
  EndpointError(int status, const std::string& body_excerpt)
      : Error("endpoint", "HTTP " + std::to_string(status) + ": " + body_excerpt),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Retryable failure (429, 5xx, timeout). The client retries these and
// surfaces a TransportError once attempts are exhausted.
class TransientError : public Error {
 public:
  explicit TransientError(const std::string& m) : Error("transient", m) {}
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& m) : Error("transport", m) {}
};

// The backend rejected the prompt as exceeding its context window.
class OversizeError : public Error {
 public:
  OversizeError(const std::string& m, std::string doc_id = {})
      : Error("oversize", doc_id.empty() ? m : "document " + doc_id + ": " + m),
        doc_id_(std::move(doc_id)) {}
  const std::string& doc_id() const { return doc_id_; }

 private:
  std::string doc_id_;
};

class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& m) : Error("capability", m) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& m) : Error("alignment", m) {}
};

}  // namespace higen

#endif  // HIGEN_ERROR_H_
