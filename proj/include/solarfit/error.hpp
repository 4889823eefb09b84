// Copyright (c) 2026 The solarfit authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace solarfit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class InvalidGeometryError : public Error
{
  public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error
{
  public:
    ParseError(const std::string& msg, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + msg : msg)
      , m_line(line)
    {
    }

    std::size_t line() const { return m_line; }

  private:
    std::size_t m_line;
};

class MissingPvOutError : public Error
{
  public:
    explicit MissingPvOutError(std::string building_id)
      : Error("no PV_out value available for building " + building_id)
      , m_building_id(std::move(building_id))
    {
    }

    const std::string& building_id() const { return m_building_id; }

  private:
    std::string m_building_id;
};

class EmptyDistrictRasterError : public Error
{
  public:
    using Error::Error;
};

class InsufficientSamplesError : public Error
{
  public:
    using Error::Error;
};

class NotFoundError : public Error
{
  public:
    using Error::Error;
};

class DegenerateResultError : public Error
{
  public:
    using Error::Error;
};

class IoError : public Error
{
  public:
    using Error::Error;
};

class InvalidArgumentError : public Error
{
  public:
    using Error::Error;
};

}
