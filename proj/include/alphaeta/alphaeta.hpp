#pragma once

#include "alphaeta/numeric.hpp"
#include "alphaeta/rng.hpp"
#include "alphaeta/parallel.hpp"
#include "alphaeta/cipher_table.hpp"
#include "alphaeta/entropy.hpp"
#include "alphaeta/gf2.hpp"
#include "alphaeta/keystream.hpp"
#include "alphaeta/signal.hpp"
#include "alphaeta/measurement.hpp"
#include "alphaeta/fock.hpp"
#include "alphaeta/attacks.hpp"
#include "alphaeta/bounds.hpp"
#include "alphaeta/homophonic.hpp"
#include "alphaeta/toy.hpp"
#include "alphaeta/commands.hpp"
