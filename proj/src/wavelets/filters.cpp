#include "mammo/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace mammo {

namespace {

Eigen::VectorXd taps(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (double x : c)
    v[i++] = x;
  return v;
}

// Orthogonal bank from its decomposition lowpass h:
//   g[n] = (-1)^(n+1) h[L-1-n], synthesis filters are the time reversals.
WaveletFilterBank orthogonal_bank(WaveletFamily family, Eigen::VectorXd lowpass) {
  const Eigen::Index L = lowpass.size();
  Eigen::VectorXd highpass(L);
  for (Eigen::Index n = 0; n < L; ++n)
    highpass[n] = (n % 2 ? 1.0 : -1.0) * lowpass[L - 1 - n];
  WaveletFilterBank bank{family, lowpass, highpass, lowpass.reverse(), highpass.reverse()};
  return bank;
}

// Coefficient tables are the standard published values (Daubechies, "Ten
// Lectures on Wavelets", and the PyWavelets/MATLAB wfilters tables). They are
// verified in the test suite by the quadrature conditions
//   sum h = sqrt(2),  sum g = 0,  sum h[n] h[n+2k] = delta_k  (orthogonal)
// and by periodic perfect reconstruction for all three banks.

WaveletFilterBank make_db8() {
  return orthogonal_bank(
      WaveletFamily::Daubechies8,
      taps({-0.00011747678412476953, 0.0006754494064505693, -0.00039174037337694705,
            -0.004870352993451574, 0.008746094047405777, 0.013981027917398282,
            -0.044088253930794755, -0.017369301001807547, 0.12874742662047847,
            0.0004724845739132828, -0.2840155429615469, -0.015829105256349306,
            0.5853546836542067, 0.6756307362972898, 0.31287159091429995,
            0.05441584224310401}));
}

WaveletFilterBank make_sym8() {
  return orthogonal_bank(
      WaveletFamily::Symlet8,
      taps({-0.0033824159510061256, -0.0005421323317911481, 0.03169508781149298,
            0.007607487324917605, -0.1432942383508097, -0.061273359067658524,
            0.4813596512583722, 0.7771857517005235, 0.3644418948353314,
            -0.05194583810770904, -0.027219029917056003, 0.049137179673607506,
            0.003808752013890615, -0.01495225833704823, -0.0003029205147213668,
            0.0018899503327594609}));
}

// Cohen-Daubechies-Feauveau spline pair: synthesis lowpass is the cubic
// B-spline sqrt(2)/8 [1 3 3 1]; analysis lowpass has 16 taps.
WaveletFilterBank make_bior37() {
  Eigen::VectorXd dec_lo = taps({0.0030210861012608843, -0.009063258303782653,
                                 -0.01683176542131064, 0.074663985074019, 0.03133297870736289,
                                 -0.301159125922835, -0.02649924094534547, 0.9516421218971786,
                                 0.9516421218971786, -0.02649924094534547, -0.301159125922835,
                                 0.03133297870736289, 0.074663985074019, -0.01683176542131064,
                                 -0.009063258303782653, 0.0030210861012608843});
  Eigen::VectorXd dec_hi =
      taps({-0.1767766952966369, 0.5303300858899106, -0.5303300858899106, 0.1767766952966369});
  Eigen::VectorXd rec_lo =
      taps({0.1767766952966369, 0.5303300858899106, 0.5303300858899106, 0.1767766952966369});
  // g̃[n] = (-1)^n h[L-1-n] with the same centring as the pair above.
  Eigen::VectorXd rec_hi(16);
  for (Eigen::Index n = 0; n < 16; ++n)
    rec_hi[n] = (n % 2 ? -1.0 : 1.0) * dec_lo[15 - n];
  return {WaveletFamily::Biorthogonal3_7, dec_lo, dec_hi, rec_lo, rec_hi};
}

template <WaveletFilterBank (*Make)()> const WaveletFilterBank &checked() {
  static const WaveletFilterBank bank = [] {
    WaveletFilterBank b = Make();
    validate_filter_bank(b);
    return b;
  }();
  return bank;
}

} // namespace

std::optional<WaveletFamily> parse_family(std::string_view name) {
  if (name == "bior3.7")
    return WaveletFamily::Biorthogonal3_7;
  if (name == "db8")
    return WaveletFamily::Daubechies8;
  if (name == "sym8")
    return WaveletFamily::Symlet8;
  return std::nullopt;
}

std::string_view to_string(WaveletFamily family) {
  switch (family) {
  case WaveletFamily::Biorthogonal3_7:
    return "bior3.7";
  case WaveletFamily::Daubechies8:
    return "db8";
  case WaveletFamily::Symlet8:
    return "sym8";
  }
  return "?";
}

Eigen::Index WaveletFilterBank::frame_length() const {
  return std::max({analysis_lowpass.size(), analysis_highpass.size(), synthesis_lowpass.size(),
                   synthesis_highpass.size()});
}

void validate_filter_bank(const WaveletFilterBank &bank, double tol) {
  const auto fail = [&](const std::string &what) {
    throw std::logic_error(std::string(to_string(bank.family)) + " filter bank: " + what);
  };
  if (std::abs(bank.analysis_highpass.sum()) > tol)
    fail("analysis highpass does not sum to 0");
  if (std::abs(bank.analysis_lowpass.sum() - std::sqrt(2.0)) > tol)
    fail("analysis lowpass does not sum to sqrt(2)");
  if (std::abs(bank.synthesis_lowpass.sum() - std::sqrt(2.0)) > tol)
    fail("synthesis lowpass does not sum to sqrt(2)");
  if (bank.orthogonal()) {
    if (std::abs(bank.analysis_lowpass.squaredNorm() - 1.0) > tol)
      fail("lowpass energy is not 1");
    if (bank.synthesis_lowpass != bank.analysis_lowpass.reverse() ||
        bank.synthesis_highpass != bank.analysis_highpass.reverse())
      fail("synthesis filters are not time-reversed analysis filters");
  }
}

const WaveletFilterBank &filter_bank(WaveletFamily family) {
  switch (family) {
  case WaveletFamily::Biorthogonal3_7:
    return checked<make_bior37>();
  case WaveletFamily::Daubechies8:
    return checked<make_db8>();
  case WaveletFamily::Symlet8:
    return checked<make_sym8>();
  }
  throw std::invalid_argument("unknown wavelet family");
}

} // namespace mammo
