#pragma once

#include "rll/algebra.hpp"
#include "rll/automaton.hpp"
#include "rll/calculus.hpp"
#include "rll/closure.hpp"
#include "rll/corpus.hpp"
#include "rll/derive.hpp"
#include "rll/game.hpp"
#include "rll/parser.hpp"
#include "rll/proof_json.hpp"
#include "rll/semantics.hpp"
#include "rll/syntax.hpp"

namespace rll {
inline constexpr const char* kVersion = "0.1.0";
}
