#ifndef CACHECODE_CACHECODE_HPP
#define CACHECODE_CACHECODE_HPP

#include "cachecode/errors.hpp"
#include "cachecode/combinatorics.hpp"
#include "cachecode/finite_field.hpp"
#include "cachecode/linalg.hpp"
#include "cachecode/codes.hpp"
#include "cachecode/rational.hpp"
#include "cachecode/placement.hpp"
#include "cachecode/delivery.hpp"
#include "cachecode/decoder.hpp"
#include "cachecode/scheme.hpp"
#include "cachecode/generic_search.hpp"
#include "cachecode/tradeoff.hpp"
#include "cachecode/ingest.hpp"
#include "cachecode/worked_examples.hpp"

#endif  // CACHECODE_CACHECODE_HPP
