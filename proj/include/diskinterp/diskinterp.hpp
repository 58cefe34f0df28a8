#pragma once

// Everything except the command-line front end (diskinterp/cli.hpp).
#include "diskinterp/error.hpp"
#include "diskinterp/mobius.hpp"
#include "diskinterp/rng.hpp"
#include "diskinterp/parallel.hpp"
#include "diskinterp/classify.hpp"
#include "diskinterp/sequences.hpp"
#include "diskinterp/net.hpp"
#include "diskinterp/carleson.hpp"
#include "diskinterp/blaschke.hpp"
#include "diskinterp/quadrature.hpp"
#include "diskinterp/functions.hpp"
#include "diskinterp/spaces.hpp"
#include "diskinterp/earl.hpp"
#include "diskinterp/verify.hpp"
#include "diskinterp/io.hpp"
