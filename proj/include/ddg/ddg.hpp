#ifndef DDG_DDG_HPP
#define DDG_DDG_HPP

#include "ddg/cycles.hpp"
#include "ddg/ddgroup.hpp"
#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"
#include "ddg/linalg.hpp"
#include "ddg/regular.hpp"
#include "ddg/systems.hpp"

#endif  // DDG_DDG_HPP
