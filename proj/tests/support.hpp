#pragma once

#include "doctest.h"
#include "rgtest/error.hpp"

// Runs f and returns the kind of the rgtest::Error it throws.
template <typename F>
rgtest::ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const rgtest::Error& e) {
        return e.kind();
    }
    FAIL("expected an rgtest::Error");
    return rgtest::ErrorKind::internal;
}
