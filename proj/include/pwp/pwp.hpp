#pragma once

#include "pwp/constructions.hpp"
#include "pwp/deconstruction.hpp"
#include "pwp/errors.hpp"
#include "pwp/influence.hpp"
#include "pwp/io.hpp"
#include "pwp/link_ranking.hpp"
#include "pwp/matrix.hpp"
#include "pwp/modularity.hpp"
#include "pwp/network.hpp"
#include "pwp/ranking.hpp"
