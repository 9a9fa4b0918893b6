#pragma once

// Convenience header pulling in the whole library.

#include "diagram.hpp"
#include "dot.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "expr.hpp"
#include "json_io.hpp"
#include "poset.hpp"
#include "signature.hpp"
#include "term.hpp"
#include "zetless.hpp"
