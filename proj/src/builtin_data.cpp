#include "builtin_data.hpp"

namespace ledsel::data {

// CIE 1931 2 deg, 380..780 nm every 5 nm (CVRL ciexyz31_1 sampled at 5 nm).
const std::array<std::array<double, 3>, kCmfRows> kCie1931 = {{
    {0.001368, 3.9e-05, 0.006450001},
    {0.002236, 6.4e-05, 0.01054999},
    {0.004243, 0.00012, 0.02005001},
    {0.00765, 0.000217, 0.03621},
    {0.01431, 0.000396, 0.06785001},
    {0.02319, 0.00064, 0.1102},
    {0.04351, 0.00121, 0.2074},
    {0.07763, 0.00218, 0.3713},
    {0.13438, 0.004, 0.6456},
    {0.21477, 0.0073, 1.0390501},
    {0.2839, 0.0116, 1.3856},
    {0.3285, 0.01684, 1.62296},
    {0.34828, 0.023, 1.74706},
    {0.34806, 0.0298, 1.7826},
    {0.3362, 0.038, 1.77211},
    {0.3187, 0.048, 1.7441},
    {0.2908, 0.06, 1.6692},
    {0.2511, 0.0739, 1.5281},
    {0.19536, 0.09098, 1.28764},
    {0.1421, 0.1126, 1.0419},
    {0.09564, 0.13902, 0.8129501},
    {0.05795001, 0.1693, 0.6162},
    {0.03201, 0.20802, 0.46518},
    {0.0147, 0.2586, 0.3533},
    {0.0049, 0.323, 0.272},
    {0.0024, 0.4073, 0.2123},
    {0.0093, 0.503, 0.1582},
    {0.0291, 0.6082, 0.1117},
    {0.06327, 0.71, 0.07824999},
    {0.1096, 0.7932, 0.05725001},
    {0.1655, 0.862, 0.04216},
    {0.2257499, 0.9148501, 0.02984},
    {0.2904, 0.954, 0.0203},
    {0.3597, 0.9803, 0.0134},
    {0.4334499, 0.9949501, 0.008749999},
    {0.5120501, 1.0, 0.005749999},
    {0.5945, 0.995, 0.0039},
    {0.6784, 0.9786, 0.002749999},
    {0.7621, 0.952, 0.0021},
    {0.8425, 0.9154, 0.0018},
    {0.9163, 0.87, 0.001650001},
    {0.9786, 0.8163, 0.0014},
    {1.0263, 0.757, 0.0011},
    {1.0567, 0.6949, 0.001},
    {1.0622, 0.631, 0.0008},
    {1.0456, 0.5668, 0.0006},
    {1.0026, 0.503, 0.00034},
    {0.9384, 0.4412, 0.00024},
    {0.8544499, 0.381, 0.00019},
    {0.7514, 0.321, 0.0001},
    {0.6424, 0.265, 4.999999e-05},
    {0.5419, 0.217, 3e-05},
    {0.4479, 0.175, 2e-05},
    {0.3608, 0.1382, 1e-05},
    {0.2835, 0.107, 0.0},
    {0.2187, 0.0816, 0.0},
    {0.1649, 0.061, 0.0},
    {0.1212, 0.04458, 0.0},
    {0.0874, 0.032, 0.0},
    {0.0636, 0.0232, 0.0},
    {0.04677, 0.017, 0.0},
    {0.0329, 0.01192, 0.0},
    {0.0227, 0.00821, 0.0},
    {0.01584, 0.005723, 0.0},
    {0.01135916, 0.004102, 0.0},
    {0.008110916, 0.002929, 0.0},
    {0.005790346, 0.002091, 0.0},
    {0.004109457, 0.001484, 0.0},
    {0.002899327, 0.001047, 0.0},
    {0.00204919, 0.00074, 0.0},
    {0.001439971, 0.00052, 0.0},
    {0.0009999493, 0.0003611, 0.0},
    {0.0006900786, 0.0002492, 0.0},
    {0.0004760213, 0.0001719, 0.0},
    {0.0003323011, 0.00012, 0.0},
    {0.0002348261, 8.48e-05, 0.0},
    {0.0001661505, 6e-05, 0.0},
    {0.000117413, 4.24e-05, 0.0},
    {8.307527e-05, 3e-05, 0.0},
    {5.870652e-05, 2.12e-05, 0.0},
    {4.150994e-05, 1.499e-05, 0.0}
}};

// CIE 1964 10 deg, 380..780 nm every 5 nm (CVRL ciexyz64_1 sampled at 5 nm).
const std::array<std::array<double, 3>, kCmfRows> kCie1964 = {{
    {0.000159952, 1.7364e-05, 0.000704776},
    {0.00066244, 7.156e-05, 0.0029278},
    {0.0023616, 0.0002534, 0.0104822},
    {0.0072423, 0.0007685, 0.032344},
    {0.0191097, 0.0020044, 0.0860109},
    {0.0434, 0.004509, 0.19712},
    {0.084736, 0.008756, 0.389366},
    {0.140638, 0.014456, 0.65676},
    {0.204492, 0.021391, 0.972542},
    {0.264737, 0.029497, 1.2825},
    {0.314679, 0.038676, 1.55348},
    {0.357719, 0.049602, 1.7985},
    {0.383734, 0.062077, 1.96728},
    {0.386726, 0.074704, 2.0273},
    {0.370702, 0.089456, 1.9948},
    {0.342957, 0.106256, 1.9007},
    {0.302273, 0.128201, 1.74537},
    {0.254085, 0.152761, 1.5549},
    {0.195618, 0.18519, 1.31756},
    {0.132349, 0.21994, 1.0302},
    {0.080507, 0.253589, 0.772125},
    {0.041072, 0.297665, 0.57006},
    {0.016172, 0.339133, 0.415254},
    {0.005132, 0.395379, 0.302356},
    {0.003816, 0.460777, 0.218502},
    {0.015444, 0.53136, 0.159249},
    {0.037465, 0.606741, 0.112044},
    {0.071358, 0.68566, 0.082248},
    {0.117749, 0.761757, 0.060709},
    {0.172953, 0.82333, 0.04305},
    {0.236491, 0.875211, 0.030451},
    {0.304213, 0.92381, 0.020584},
    {0.376772, 0.961988, 0.013676},
    {0.451584, 0.9822, 0.007918},
    {0.529826, 0.991761, 0.003988},
    {0.616053, 0.99911, 0.001091},
    {0.705224, 0.99734, 0.0},
    {0.793832, 0.98238, 0.0},
    {0.878655, 0.955552, 0.0},
    {0.951162, 0.915175, 0.0},
    {1.01416, 0.868934, 0.0},
    {1.0743, 0.825623, 0.0},
    {1.11852, 0.777405, 0.0},
    {1.1343, 0.720353, 0.0},
    {1.12399, 0.658341, 0.0},
    {1.0891, 0.593878, 0.0},
    {1.03048, 0.527963, 0.0},
    {0.95074, 0.461834, 0.0},
    {0.856297, 0.398057, 0.0},
    {0.75493, 0.339554, 0.0},
    {0.647467, 0.283493, 0.0},
    {0.53511, 0.228254, 0.0},
    {0.431567, 0.179828, 0.0},
    {0.34369, 0.140211, 0.0},
    {0.268329, 0.107633, 0.0},
    {0.2043, 0.081187, 0.0},
    {0.152568, 0.060281, 0.0},
    {0.11221, 0.044096, 0.0},
    {0.0812606, 0.0318004, 0.0},
    {0.05793, 0.0226017, 0.0},
    {0.0408508, 0.0159051, 0.0},
    {0.028623, 0.0111303, 0.0},
    {0.0199413, 0.0077488, 0.0},
    {0.013842, 0.0053751, 0.0},
    {0.00957688, 0.00371774, 0.0},
    {0.0066052, 0.00256456, 0.0},
    {0.00455263, 0.00176847, 0.0},
    {0.0031447, 0.00122239, 0.0},
    {0.00217496, 0.00084619, 0.0},
    {0.0015057, 0.00058644, 0.0},
    {0.00104476, 0.00040741, 0.0},
    {0.00072745, 0.000284041, 0.0},
    {0.000508258, 0.00019873, 0.0},
    {0.00035638, 0.00013955, 0.0},
    {0.000250969, 9.8428e-05, 0.0},
    {0.00017773, 6.9819e-05, 0.0},
    {0.00012639, 4.9737e-05, 0.0},
    {9.0151e-05, 3.55405e-05, 0.0},
    {6.45258e-05, 2.5486e-05, 0.0},
    {4.6339e-05, 1.83384e-05, 0.0},
    {3.34117e-05, 1.3249e-05, 0.0},
}};

// MacAdam (1942): center x, center y, semi-major, semi-minor, theta (deg).
const std::array<std::array<double, 5>, kMacAdamCount> kMacAdam1942 = {{
    {0.160, 0.057, 0.00085, 0.00035, 62.5},
    {0.187, 0.118, 0.00220, 0.00055, 77},
    {0.253, 0.125, 0.00250, 0.00050, 55.5},
    {0.150, 0.680, 0.00960, 0.00230, 105},
    {0.131, 0.521, 0.00470, 0.00200, 112.5},
    {0.212, 0.550, 0.00580, 0.00230, 100},
    {0.258, 0.450, 0.00500, 0.00200, 92},
    {0.152, 0.365, 0.00380, 0.00190, 110},
    {0.280, 0.385, 0.00400, 0.00150, 75.5},
    {0.380, 0.498, 0.00440, 0.00120, 70},
    {0.160, 0.200, 0.00210, 0.00095, 104},
    {0.228, 0.250, 0.00310, 0.00090, 72},
    {0.305, 0.323, 0.00230, 0.00090, 58},
    {0.385, 0.393, 0.00380, 0.00160, 65.5},
    {0.472, 0.399, 0.00320, 0.00140, 51},
    {0.527, 0.350, 0.00260, 0.00130, 20},
    {0.475, 0.300, 0.00290, 0.00110, 28.5},
    {0.510, 0.236, 0.00240, 0.00120, 29.5},
    {0.596, 0.283, 0.00260, 0.00130, 13},
    {0.344, 0.284, 0.00230, 0.00090, 60},
    {0.390, 0.237, 0.00250, 0.00100, 47},
    {0.441, 0.198, 0.00280, 0.00095, 34.5},
    {0.278, 0.223, 0.00240, 0.00055, 57.5},
    {0.300, 0.163, 0.00290, 0.00060, 54},
    {0.365, 0.153, 0.00360, 0.00095, 40}
}};

}  // namespace ledsel::data
