#pragma once

#include "crystalk/catalog.hpp"
#include "crystalk/intlin.hpp"
#include "crystalk/lattice.hpp"
#include "crystalk/oracle.hpp"
#include "crystalk/report.hpp"
#include "crystalk/repring.hpp"
#include "crystalk/sweep.hpp"
#include "crystalk/toruskt.hpp"
