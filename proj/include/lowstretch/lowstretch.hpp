#pragma once

#include "lowstretch/akpw.hpp"
#include "lowstretch/bartal.hpp"
#include "lowstretch/common.hpp"
#include "lowstretch/contraction.hpp"
#include "lowstretch/generators.hpp"
#include "lowstretch/metrics.hpp"
#include "lowstretch/multigraph.hpp"
#include "lowstretch/partition.hpp"
#include "lowstretch/pipeline.hpp"
#include "lowstretch/sssp.hpp"
#include "lowstretch/steiner.hpp"
#include "lowstretch/two_stage.hpp"
#include "lowstretch/union_find.hpp"
