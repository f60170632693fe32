"""Centralized configuration constants."""

# Time
SECONDS_PER_DAY = 86400
REPOST_WINDOW_SECONDS = 86400  # reposts count only within 24h of the original

# Users
HISTORY_LIMIT = 50

# Text features
TOPIC_LIKELIHOOD_THRESHOLD = 0.5
HATE_THRESHOLD = 0.5
SENTIMENT_THRESHOLD = 0.05
SENTIMENT_ALPHA = 15.0
UNKNOWN_HASHTAG_CODE = 0

# LDA
LDA_TOPICS = 10
LDA_BETA = 0.01
LDA_TRAIN_SWEEPS = 200
LDA_INFER_SWEEPS = 50
LDA_SEED = 0

# LeaderRank
LEADERRANK_TOL = 1e-8
LEADERRANK_MAX_ITER = 10_000

# Datasets
RATIO_TAGS = ("1:1", "1:5", "1:10", "general-1:5")
NEAREST_NEGATIVES = {"1:1": 1, "1:5": 5, "1:10": 5}
RANDOM_NEGATIVES = {"1:1": 0, "1:5": 0, "1:10": 5}
GENERAL_NEGATIVES = 5
GENERAL_DRAW_BUDGET = 10_000

# Split protocols
PROTOCOLS = ("mixed-mc", "perhash-mc", "loho-ood", "temporal")
MC_REPEATS = 10
MC_FRACTIONS = (0.63, 0.07, 0.30)
LOHO_SUBSETS = 10
TEMPORAL_WINDOWS = 13
TEMPORAL_TRAIN_WINDOWS = 3
TEMPORAL_VAL_FRACTION = 0.10

# Gradient-boosted trees
GBDT_MAX_DEPTH = 8
GBDT_LEARNING_RATE = 0.3
GBDT_N_ESTIMATORS = 100
GBDT_MIN_CHILD_WEIGHT = 1.0
GBDT_SUBSAMPLE = 1.0
GBDT_REG_LAMBDA = 1.0
GBDT_GAMMA = 0.0
EARLY_STOPPING_PATIENCE = 10

# MLP
MLP_WIDTHS = (128, 128, 64)
MLP_LEARNING_RATE = 0.001
MLP_BATCH_SIZE = 40
MLP_MAX_EPOCHS = 200

# Bag-of-words input for the content-only neural model
BOW_VOCAB_SIZE = 2000

# Evaluation
CLASSIFICATION_THRESHOLD = 0.5
COLLINEARITY_THRESHOLD = 0.7
EXACT_WILCOXON_MAX_N = 20
IMPORTANCE_TOP_K = 20

# Environment
CACHE_ENV_VAR = "REPOSTLAB_CACHE"
TOOL_VERSION = "0.1.0"
