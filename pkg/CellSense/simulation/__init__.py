from .scenario import (ChannelModel, NetworkScenario)
from .channels import (ChannelRealization, gen_channels)
from .received import (ReceivedBlock, gen_symbols, synthesize, true_hph_moments)
