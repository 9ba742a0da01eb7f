#pragma once

#include "trajeval/core_types.hpp"
#include "trajeval/assignment.hpp"
#include "trajeval/metric_efe.hpp"
#include "trajeval/metric_ospa2.hpp"
#include "trajeval/metric_idf1.hpp"
#include "trajeval/episodes.hpp"
#include "trajeval/baselines.hpp"
#include "trajeval/degrade.hpp"
#include "trajeval/synthetic.hpp"
#include "trajeval/io.hpp"
