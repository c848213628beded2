#pragma once

#include "timeflow/association.hpp"
#include "timeflow/binomial.hpp"
#include "timeflow/classify.hpp"
#include "timeflow/error.hpp"
#include "timeflow/ingest.hpp"
#include "timeflow/naive_bayes.hpp"
#include "timeflow/parallel.hpp"
#include "timeflow/pipeline.hpp"
#include "timeflow/segment.hpp"
#include "timeflow/text.hpp"
#include "timeflow/timex.hpp"
#include "timeflow/trends.hpp"
