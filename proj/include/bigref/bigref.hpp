#pragma once

#include <bigref/bigraph.hpp>
#include <bigref/brs_file.hpp>
#include <bigref/errors.hpp>
#include <bigref/hiding.hpp>
#include <bigref/iso.hpp>
#include <bigref/operations.hpp>
#include <bigref/reaction.hpp>
#include <bigref/refinement.hpp>
#include <bigref/report.hpp>
#include <bigref/system.hpp>
#include <bigref/term.hpp>
