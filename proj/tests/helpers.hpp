#pragma once

#include <gtest/gtest.h>

#include "acu/errors.hpp"
#include "oracle.hpp"

#define EXPECT_CODE(stmt, ecode)                                               \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "no exception, expected " << acu::to_string(ecode);     \
    } catch (const acu::Error& e_) {                                           \
      EXPECT_EQ(e_.code(), ecode) << e_.what();                                \
    }                                                                          \
  } while (0)
