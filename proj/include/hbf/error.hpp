// SPDX-License-Identifier: Apache-2.0
//
// hbf - hybrid analog/digital beamforming from implicit CSI
// Copyright (C) 2026 The hbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HBF_ERROR_HPP
#define HBF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hbf
{

// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Precondition violated: bad dimensions, non-finite values, invalid configuration.
class InvalidInput : public Error
{
public:
    using Error::Error;
};

// A Gram matrix had an eigenvalue below tolerance (nearly collinear analog beams).
class NearSingular : public Error
{
public:
    using Error::Error;
};

// Combinatorial enumeration exceeds its size guard.
class TooLarge : public Error
{
public:
    using Error::Error;
};

// File could not be read or written; the message carries the path.
class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace hbf

#endif
