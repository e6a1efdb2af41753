#pragma once

#include "som_emission/binning.hpp"
#include "som_emission/error.hpp"
#include "som_emission/level_report.hpp"
#include "som_emission/model_io.hpp"
#include "som_emission/sample_data.hpp"
#include "som_emission/som.hpp"
#include "som_emission/spectrum.hpp"
