"""Maximum-margin classification in hyperbolic space.

Provides the hyperboloid / Poincare ball / half-space models, hyperbolic
and Euclidean linear SVM training, one-vs-all multi-class prediction with
Platt calibration, precision-recall evaluation, and synthetic benchmark
generators (hyperbolic Gaussian mixtures and PS-model networks).
"""

from hypersvm.errors import NumericalError, ValidationError
from hypersvm.geometry import (
    apply_isometry,
    ball_to_halfspace,
    ball_to_hyperboloid,
    halfspace_to_ball,
    hyperbolic_distance,
    hyperboloid_to_ball,
    minkowski_inner,
    translate_to,
)
from hypersvm.classifier import decide, decision_value, geometric_margin
from hypersvm.solver import TrainConfig, TrainReport, hsvm_train, euclidean_svm_train
from hypersvm.multiclass import OvaModel, ova_predict, ova_train, platt_fit
from hypersvm.evaluation import (
    CvResult,
    EvalReport,
    aupr,
    auroc,
    cross_validate,
    evaluate,
    paired_t_test,
)
from hypersvm.data import LabeledDataset
from hypersvm.synth import (
    GaussianMixtureSpec,
    gen_gaussian_mixture,
    gen_ps_dataset,
    gen_separated_pair,
)
