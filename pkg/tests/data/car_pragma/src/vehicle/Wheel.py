#@arch Component("Wheel") @on type Wheel
class Wheel:
    pass
