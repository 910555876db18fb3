"""cvsketch: streaming sketches with control-variate corrected estimators.

Tug-of-war (F2 and inner product), count-min and count-sketch point queries,
their stream-independent control variates, median-of-means aggregation, a
closed-form theory module, an exact enumeration oracle, and an experiment
harness behind a CLI. Hot kernels run on a compiled extension when present
(see cvsketch.kernels.BACKEND).
"""

from .aggregation import MoMPlan, median_of_means, plan_from_guarantee
from .control_variates import (
    CvEstimate,
    CvMomentSpec,
    IpMomentMode,
    cv_correct,
    cv_estimate_f2,
    cv_estimate_ip,
    f2_control_variate,
    f2_cv_moments,
    ip_control_variate,
    ip_cv_moments,
)
from .datasets import (
    Split,
    StreamSpec,
    as_updates,
    generate_synthetic,
    load_bag_of_words,
    load_fimi,
)
from .errors import (
    BudgetExceededError,
    DatasetFormatError,
    InvalidMomentsError,
    ItemOutOfRangeError,
    LengthMismatchError,
    MismatchedHashError,
    MissingVectorsError,
)
from .hashing import (
    MERSENNE_PRIME_61,
    PolyHashFamily,
    SignHash,
    derive_seed,
    evaluate,
    new_family,
    sign_hash,
)
from .harness import ExperimentConfig, ExperimentReport, run_experiment, summarize
from .kernels import BACKEND
from .point_query import CountMinSketch, CountSketch, PointQueryCvResult, table_params
from .theory import (
    FrequencyVector,
    Moments,
    VarianceReport,
    ams_f2_variance,
    f2_cv_report,
    inner_product,
    ip_cv_report,
    ip_variance,
    moments,
    ratio_sweep_f2,
    ratio_sweep_ip,
)
from .tug_of_war import StreamUpdate, TugOfWarSketch, estimate_ip, merge

__version__ = "0.1.0"
