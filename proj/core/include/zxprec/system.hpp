// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace zxprec {

// Frame and array dimensions of the oversampled downlink.
// One frame carries N symbols of period T. The receiver takes M_Rx samples per
// T, the transmitter signals at M_Tx pulses per T, and M = M_Rx / M_Tx must be
// an integer (M-fold upsampling between the two rates).
struct SystemDims {
  int n_symbols = 1;  // N
  int m_rx = 3;       // receive oversampling factor
  int m_tx = 3;       // transmit signaling-rate factor
  int n_tx = 1;       // transmit antennas N_t
  int n_u = 1;        // single-antenna users N_u

  int m() const { return m_rx / m_tx; }
  int n_tot() const { return n_symbols * m_rx + 1; }  // receive samples per frame
  int n_q() const { return n_symbols * m_tx + 1; }    // transmit coefficients per frame

  void validate() const {
    if (n_symbols < 1) throw std::invalid_argument("SystemDims: n_symbols must be >= 1");
    if (m_rx < 1 || m_tx < 1) throw std::invalid_argument("SystemDims: M_Rx and M_Tx must be >= 1");
    if (m_rx % m_tx != 0) throw std::invalid_argument("SystemDims: M_Rx must be a multiple of M_Tx");
    if (n_tx < 1 || n_u < 1) throw std::invalid_argument("SystemDims: antenna counts must be >= 1");
    if (n_tx < n_u) throw std::invalid_argument("SystemDims: need n_tx >= n_u for zero forcing");
  }
};

}  // namespace zxprec
