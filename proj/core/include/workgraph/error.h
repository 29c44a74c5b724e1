/*
 * Copyright (C) 2026 The Workgraph Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef WORKGRAPH_ERROR_H_
#define WORKGRAPH_ERROR_H_

#include <stdexcept>
#include <string>

namespace workgraph {

// Base for every error raised by the library. Data problems (bad input files,
// unknown nodes, malformed replies) derive from DataError; the CLI maps those
// to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class UnknownNodeError : public DataError {
 public:
  explicit UnknownNodeError(const std::string& what)
      : DataError("unknown node: " + what) {}
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace workgraph

#endif  // WORKGRAPH_ERROR_H_
