#pragma once

#include "phylosat/certify.hpp"
#include "phylosat/golden.hpp"
#include "phylosat/notation.hpp"
#include "phylosat/oracle.hpp"
#include "phylosat/rewrite.hpp"
#include "phylosat/trees.hpp"
