#pragma once

#include "prime.hpp"
#include "recurrences.hpp"
#include "monomial.hpp"
#include "pgroup.hpp"
#include "series.hpp"
#include "fp_linalg.hpp"
#include "chart.hpp"
#include "ku_modules.hpp"
#include "ass_engine.hpp"
#include "k1_reference.hpp"
#include "margolis.hpp"
#include "audits.hpp"
#include "chart_io.hpp"
