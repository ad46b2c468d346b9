__version__ = "0.1.0"
__title__ = "ChaosComp"
__description__ = "Compression based classification with n-th return Baker's maps"
__author__ = "U1traVeno"
__email__ = "happ1less1917@gmail.com"
