#pragma once

#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"
#include "finmodel/algebra.hpp"
#include "finmodel/complexes.hpp"
#include "finmodel/ainf.hpp"
#include "finmodel/yoneda.hpp"
#include "finmodel/generation.hpp"
#include "finmodel/io.hpp"
#include "finmodel/certificate_io.hpp"
