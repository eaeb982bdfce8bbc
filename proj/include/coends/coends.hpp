#pragma once
/// Umbrella header: the whole library.

#include "coends/ball.hpp"
#include "coends/catalog.hpp"
#include "coends/common.hpp"
#include "coends/components.hpp"
#include "coends/describe.hpp"
#include "coends/diagram.hpp"
#include "coends/group.hpp"
#include "coends/hausdorff.hpp"
#include "coends/pairs.hpp"
#include "coends/qimap.hpp"
#include "coends/report.hpp"
#include "coends/run.hpp"
#include "coends/space.hpp"
#include "coends/subgroup.hpp"
