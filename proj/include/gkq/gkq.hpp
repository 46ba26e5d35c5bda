#pragma once

#include <gkq/errors.hpp>
#include <gkq/gauss_hermite.hpp>
#include <gkq/hermite.hpp>
#include <gkq/kq_approx.hpp>
#include <gkq/kq_exact.hpp>
#include <gkq/mercer.hpp>
#include <gkq/quadrature_rule.hpp>
#include <gkq/tensor.hpp>
#include <gkq/types.hpp>
#include <gkq/wce.hpp>
