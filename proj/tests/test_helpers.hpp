#pragma once

// Shared device fixtures for the test suites.

#include <Eigen/Dense>

#include "cmt/device.hpp"
#include "cmt/units.hpp"

namespace cmt::test {

/// Three-cavity device with the measured circuit parameters.
inline DeviceModel paper_device() {
    DeviceModel device;
    device.cavities = {
        {1, hz_to_rad(9.55e9), hz_to_rad(0.62e6), hz_to_rad(1.8e6), 48.2e-9, 5.3e-15, 0.45e-15},
        {2, hz_to_rad(9.82e9), hz_to_rad(0.28e6), hz_to_rad(1.7e6), 48.3e-9, 4.98e-15, 0.45e-15},
        {3, hz_to_rad(11.32e9), hz_to_rad(1.42e6), hz_to_rad(1.58e6), 34.4e-9, 5.29e-15,
         0.45e-15},
    };
    device.mechanics = {
        {1, hz_to_rad(4.34e6), hz_to_rad(4.0), 4.0e-15, 22e-15},
        {2, hz_to_rad(5.64e6), hz_to_rad(8.0), 2.2e-15, 26e-15},
    };
    device.couplings.g0.resize(3, 2);
    device.couplings.g0 << hz_to_rad(33.0), hz_to_rad(34.0),
                           hz_to_rad(13.0), hz_to_rad(31.0),
                           hz_to_rad(22.0), hz_to_rad(45.0);
    return device;
}

/// Two-cavity isolator subset (cavities 1 and 2).
inline DeviceModel isolator_device() {
    DeviceModel device = paper_device();
    device.cavities.pop_back();
    Eigen::MatrixXd g0 = device.couplings.g0.topRows(2);
    device.couplings.g0 = g0;
    return device;
}

/// Small synthetic device with fast mechanical decay, for time-domain runs.
inline DeviceModel fast_device() {
    DeviceModel device;
    device.cavities = {
        {1, hz_to_rad(5.0e9), hz_to_rad(0.02e6), hz_to_rad(0.08e6)},
        {2, hz_to_rad(6.0e9), hz_to_rad(0.01e6), hz_to_rad(0.09e6)},
    };
    device.mechanics = {
        {1, hz_to_rad(3.0e6), hz_to_rad(400.0)},
        {2, hz_to_rad(3.8e6), hz_to_rad(600.0)},
    };
    device.couplings.g0.resize(2, 2);
    device.couplings.g0 << hz_to_rad(30.0), hz_to_rad(25.0),
                           hz_to_rad(20.0), hz_to_rad(35.0);
    return device;
}

}  // namespace cmt::test
