#pragma once

// Umbrella include for the whole library.

#include "rulemine/apriori.hpp"
#include "rulemine/core.hpp"
#include "rulemine/interest.hpp"
#include "rulemine/oracle.hpp"
#include "rulemine/pipeline.hpp"
#include "rulemine/quantitative.hpp"
#include "rulemine/rulegen.hpp"
#include "rulemine/taxonomy.hpp"
#include "rulemine/transform.hpp"
