/*
 * Copyright 2026 The TXL-ACAM Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace txl {

using Volts = double;
using Amps = double;
using Siemens = double;
using Seconds = double;
using Farads = double;
using Ohms = double;
using Joules = double;

/// Base class for every domain error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoConvergence : public Error { public: using Error::Error; };
class NoCrossing : public Error { public: using Error::Error; };
class ImmutableDevice : public Error { public: using Error::Error; };
class OutOfRange : public Error { public: using Error::Error; };
class ModeError : public Error { public: using Error::Error; };
class AddressOutOfRange : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };
class OutOfSupport : public Error { public: using Error::Error; };

/// Malformed input file or config; carries the offending location in the message.
class ParseError : public Error { public: using Error::Error; };

/// A requested threshold lies outside what the device range can realize.
class Unachievable : public Error {
public:
    Unachievable(const std::string& what, Volts lo, Volts hi)
        : Error(what), achievable_low(lo), achievable_high(hi) {}
    Volts achievable_low;
    Volts achievable_high;
};

} // namespace txl
