// Published baseline errors, copied from the respective model papers.

#include "rmm/evaluation.hpp"

namespace rmm::eval {

namespace {

const PublishedResult kUnivariate[] = {
    {"ECL", 48, "Informer", 0.239, 0.359},
    {"ECL", 48, "LSTMa", 0.493, 0.539},
    {"ECL", 48, "ARIMA", 0.879, 0.764},
    {"ECL", 168, "Informer", 0.447, 0.503},
    {"ECL", 168, "LSTMa", 0.723, 0.655},
    {"ECL", 168, "ARIMA", 1.032, 0.833},
    {"ECL", 336, "Informer", 0.489, 0.528},
    {"ECL", 336, "LSTMa", 1.212, 0.898},
    {"ECL", 336, "ARIMA", 1.136, 0.876},
    {"ECL", 720, "Informer", 0.540, 0.571},
    {"ECL", 720, "LSTMa", 1.511, 0.966},
    {"ECL", 720, "ARIMA", 1.251, 0.933},
    {"ECL", 960, "Informer", 0.582, 0.608},
    {"ECL", 960, "LSTMa", 1.545, 1.006},
    {"ECL", 960, "ARIMA", 1.370, 0.982},
    {"ETTh1", 24, "Informer", 0.098, 0.247},
    {"ETTh1", 24, "LSTMa", 0.114, 0.272},
    {"ETTh1", 24, "ARIMA", 0.108, 0.284},
    {"ETTh1", 48, "Informer", 0.158, 0.319},
    {"ETTh1", 48, "LSTMa", 0.193, 0.358},
    {"ETTh1", 48, "ARIMA", 0.175, 0.424},
    {"ETTh1", 168, "Informer", 0.183, 0.346},
    {"ETTh1", 168, "LSTMa", 0.236, 0.392},
    {"ETTh1", 168, "ARIMA", 0.396, 0.504},
    {"ETTh1", 336, "Informer", 0.222, 0.387},
    {"ETTh1", 336, "LSTMa", 0.590, 0.698},
    {"ETTh1", 336, "ARIMA", 0.468, 0.593},
    {"ETTh1", 720, "Informer", 0.269, 0.435},
    {"ETTh1", 720, "LSTMa", 0.683, 0.768},
    {"ETTh1", 720, "ARIMA", 0.659, 0.766},
    {"ETTh2", 24, "Informer", 0.093, 0.240},
    {"ETTh2", 24, "LSTMa", 0.155, 0.307},
    {"ETTh2", 24, "ARIMA", 3.554, 0.445},
    {"ETTh2", 48, "Informer", 0.155, 0.314},
    {"ETTh2", 48, "LSTMa", 0.190, 0.348},
    {"ETTh2", 48, "ARIMA", 3.190, 0.474},
    {"ETTh2", 168, "Informer", 0.232, 0.389},
    {"ETTh2", 168, "LSTMa", 0.385, 0.514},
    {"ETTh2", 168, "ARIMA", 2.800, 0.595},
    {"ETTh2", 336, "Informer", 0.263, 0.417},
    {"ETTh2", 336, "LSTMa", 0.558, 0.606},
    {"ETTh2", 336, "ARIMA", 2.753, 0.738},
    {"ETTh2", 720, "Informer", 0.277, 0.431},
    {"ETTh2", 720, "LSTMa", 0.640, 0.681},
    {"ETTh2", 720, "ARIMA", 2.878, 1.044},
    {"ETTm1", 24, "Informer", 0.030, 0.137},
    {"ETTm1", 24, "LSTMa", 0.121, 0.233},
    {"ETTm1", 24, "ARIMA", 0.090, 0.206},
    {"ETTm1", 48, "Informer", 0.069, 0.203},
    {"ETTm1", 48, "LSTMa", 0.305, 0.411},
    {"ETTm1", 48, "ARIMA", 0.179, 0.306},
    {"ETTm1", 96, "Informer", 0.194, 0.372},
    {"ETTm1", 96, "LSTMa", 0.287, 0.420},
    {"ETTm1", 96, "ARIMA", 0.272, 0.399},
    {"ETTm1", 288, "Informer", 0.401, 0.554},
    {"ETTm1", 288, "LSTMa", 0.524, 0.584},
    {"ETTm1", 288, "ARIMA", 0.462, 0.558},
    {"ETTm1", 672, "Informer", 0.512, 0.644},
    {"ETTm1", 672, "LSTMa", 1.064, 0.873},
    {"ETTm1", 672, "ARIMA", 0.639, 0.697},
    {"Weather", 24, "Informer", 0.117, 0.251},
    {"Weather", 24, "LSTMa", 0.131, 0.254},
    {"Weather", 24, "ARIMA", 0.219, 0.355},
    {"Weather", 48, "Informer", 0.178, 0.318},
    {"Weather", 48, "LSTMa", 0.190, 0.334},
    {"Weather", 48, "ARIMA", 0.273, 0.409},
    {"Weather", 168, "Informer", 0.266, 0.398},
    {"Weather", 168, "LSTMa", 0.341, 0.448},
    {"Weather", 168, "ARIMA", 0.503, 0.599},
    {"Weather", 336, "Informer", 0.297, 0.416},
    {"Weather", 336, "LSTMa", 0.456, 0.554},
    {"Weather", 336, "ARIMA", 0.728, 0.730},
};

const PublishedResult kMultivariate[] = {
    {"ETTm2", 96, "f-FEDformer", 0.203, 0.287},
    {"ETTm2", 96, "w-FEDformer", 0.204, 0.288},
    {"ETTm2", 192, "f-FEDformer", 0.269, 0.328},
    {"ETTm2", 192, "w-FEDformer", 0.316, 0.363},
    {"ETTm2", 336, "f-FEDformer", 0.325, 0.366},
    {"ETTm2", 336, "w-FEDformer", 0.359, 0.387},
    {"ETTm2", 720, "f-FEDformer", 0.421, 0.415},
    {"ETTm2", 720, "w-FEDformer", 0.433, 0.432},
    {"Exchange", 96, "f-FEDformer", 0.148, 0.278},
    {"Exchange", 96, "w-FEDformer", 0.139, 0.276},
    {"Exchange", 192, "f-FEDformer", 0.271, 0.380},
    {"Exchange", 192, "w-FEDformer", 0.256, 0.369},
    {"Exchange", 336, "f-FEDformer", 0.460, 0.500},
    {"Exchange", 336, "w-FEDformer", 0.426, 0.464},
    {"Exchange", 720, "f-FEDformer", 1.195, 0.841},
    {"Exchange", 720, "w-FEDformer", 1.090, 0.800},
    {"ILI", 24, "f-FEDformer", 3.338, 1.260},
    {"ILI", 24, "w-FEDformer", 2.203, 0.963},
    {"ILI", 36, "f-FEDformer", 2.678, 1.080},
    {"ILI", 36, "w-FEDformer", 2.272, 0.976},
    {"ILI", 48, "f-FEDformer", 2.622, 1.078},
    {"ILI", 48, "w-FEDformer", 2.209, 0.981},
    {"ILI", 60, "f-FEDformer", 2.857, 1.157},
    {"ILI", 60, "w-FEDformer", 2.545, 1.061},
    {"Weather", 96, "f-FEDformer", 0.217, 0.296},
    {"Weather", 96, "w-FEDformer", 0.227, 0.304},
    {"Weather", 192, "f-FEDformer", 0.276, 0.336},
    {"Weather", 192, "w-FEDformer", 0.295, 0.363},
    {"Weather", 336, "f-FEDformer", 0.339, 0.380},
    {"Weather", 336, "w-FEDformer", 0.381, 0.416},
    {"Weather", 720, "f-FEDformer", 0.403, 0.428},
    {"Weather", 720, "w-FEDformer", 0.424, 0.434},
};

}  // namespace

std::span<const PublishedResult> published_baselines(data::Task task) {
  if (task == data::Task::Univariate) return kUnivariate;
  return kMultivariate;
}

}  // namespace rmm::eval
