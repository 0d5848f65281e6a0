#pragma once

#include "qif/ast.hpp"
#include "qif/belief.hpp"
#include "qif/divergence.hpp"
#include "qif/error.hpp"
#include "qif/extended_real.hpp"
#include "qif/lint.hpp"
#include "qif/metrics.hpp"
#include "qif/parser.hpp"
#include "qif/pretty.hpp"
#include "qif/rational.hpp"
#include "qif/scenario.hpp"
#include "qif/semantics.hpp"
