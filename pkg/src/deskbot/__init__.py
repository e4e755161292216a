"""deskbot: a desk-scale humanoid assistant runtime.

Subpackages:
    intent    - retrieval chatbot (bag-of-words MLP, training, prediction)
    gait      - keyframe gait generation and interruptible execution
    hal       - simulated servo bus, trace logging, dot-matrix display
    overseer  - command routing, segment supervision, session loop, metrics
    assistant - offline home-assistant providers
    gateway   - operator console wire protocol and broadcast server
"""

__version__ = "0.1.0"
