from typing import Union, List, Dict, TypeAlias

import numpy as np
import numpy.typing as npt
from ruamel.yaml.comments import CommentedMap, CommentedSeq

# Real-valued vectors and matrices (features, probabilities)
FloatArray: TypeAlias = npt.NDArray[np.float64]

# Integer label and word vectors
IntArray: TypeAlias = npt.NDArray[np.int64]

# Ordered binary symbols, one uint8 per symbol
BitSequence: TypeAlias = npt.NDArray[np.uint8]

# Describe the type of data returned by model_dump()
SerializableData: TypeAlias = Union[Dict[str, "SerializableData"], List["SerializableData"], str, int, float, bool, None]

# Describe the rich text structure output by ruamel.yaml
CommentedStructure: TypeAlias = Union[CommentedMap, CommentedSeq, str, int, float, bool, None]
