//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace synthphore {

// Root of every error raised by the library. Each concrete failure mode named
// in the public contracts has its own subclass so callers can catch precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SYNTHPHORE_DEFINE_ERROR(Name, Base) \
  class Name : public Base {                \
   public:                                  \
    using Base::Base;                       \
  }

SYNTHPHORE_DEFINE_ERROR(InvalidArgument, Error);

// chem
SYNTHPHORE_DEFINE_ERROR(ParseError, Error);
SYNTHPHORE_DEFINE_ERROR(SmartsError, ParseError);
SYNTHPHORE_DEFINE_ERROR(KekulizeError, ParseError);
SYNTHPHORE_DEFINE_ERROR(SanitizeError, Error);
SYNTHPHORE_DEFINE_ERROR(LengthMismatch, Error);
SYNTHPHORE_DEFINE_ERROR(EmbedFailure, Error);
SYNTHPHORE_DEFINE_ERROR(EmptyPharmacophore, Error);

// synthesis engine
SYNTHPHORE_DEFINE_ERROR(DuplicateEntry, Error);
SYNTHPHORE_DEFINE_ERROR(EmptyCatalog, Error);
SYNTHPHORE_DEFINE_ERROR(ArityMismatch, Error);
SYNTHPHORE_DEFINE_ERROR(NoProduct, Error);
SYNTHPHORE_DEFINE_ERROR(ReplayMismatch, Error);
SYNTHPHORE_DEFINE_ERROR(UnknownBlock, Error);
SYNTHPHORE_DEFINE_ERROR(SamplingExhausted, Error);

// model / training
SYNTHPHORE_DEFINE_ERROR(ShapeMismatch, Error);
SYNTHPHORE_DEFINE_ERROR(ZeroVector, Error);
SYNTHPHORE_DEFINE_ERROR(DivergenceError, Error);
SYNTHPHORE_DEFINE_ERROR(ChecksumError, Error);
SYNTHPHORE_DEFINE_ERROR(UnsupportedVersion, Error);
SYNTHPHORE_DEFINE_ERROR(CatalogMismatch, Error);

// applications
SYNTHPHORE_DEFINE_ERROR(DeadEnd, Error);
SYNTHPHORE_DEFINE_ERROR(ExtinctPopulation, Error);

// external tools
SYNTHPHORE_DEFINE_ERROR(ExternalToolMissing, Error);
SYNTHPHORE_DEFINE_ERROR(ToolFailure, Error);

#undef SYNTHPHORE_DEFINE_ERROR

}  // namespace synthphore
