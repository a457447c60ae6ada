#ifndef GRETA_GRETA_HPP
#define GRETA_GRETA_HPP

#include "greta/bench.hpp"
#include "greta/common.hpp"
#include "greta/csv.hpp"
#include "greta/engine.hpp"
#include "greta/event.hpp"
#include "greta/generate.hpp"
#include "greta/graph.hpp"
#include "greta/oracle.hpp"
#include "greta/parser.hpp"
#include "greta/pattern.hpp"
#include "greta/payload.hpp"
#include "greta/query.hpp"
#include "greta/rewrite.hpp"
#include "greta/template.hpp"

#endif
