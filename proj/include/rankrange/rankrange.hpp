#pragma once

// Umbrella header.

#include <rankrange/compression.hpp>
#include <rankrange/decomposition.hpp>
#include <rankrange/error.hpp>
#include <rankrange/geometry.hpp>
#include <rankrange/pair.hpp>
#include <rankrange/region.hpp>
#include <rankrange/spectrum.hpp>
#include <rankrange/triangle.hpp>
